#pragma once

#include "torsorkit/pretorsor.hpp"

namespace torsorkit {

class MembershipFailure : public Error {
public:
    using Error::Error;
};

class RangeFailure : public Error {
public:
    using Error::Error;
};

class NotFlat : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

// which degree-zero algebra the calculus lives on
enum class CalcBase { A, B };

// Omega^1 inside T (x)_B T (base A, chain "A T B T A") or T (x)_A T (base B,
// chain "B T A T B"); Omega^2 = Omega^1 (x) Omega^1 over the base, mapped into
// the four-factor chain.
struct DiffCalculus {
    CalcBase base;
    Algebra degree0;
    std::string spec1, spec2;
    Subspace omega1;     // in the carrier of spec1
    Bimodule omega1_mod; // degree0-degree0 bimodule on omega1 coordinates
    Matrix lift1;        // k-level lifts of the omega1 basis
    TensorSpace omega2;
    Matrix omega2_into;  // omega2 -> carrier of spec2
    bool omega2_injective = false;
    Matrix d0;           // degree0 -> omega1
    Matrix d1;           // omega1 -> omega2, solved through omega2_into
};

// throws PreconditionFailed when tau misses (d), MembershipFailure when d lands outside
DiffCalculus build_calculus(const PreTorsorBundle& b, CalcBase base, Report& r);

struct Connection {
    TensorSpace space; // T (x)_A Omega^1(A) or Omega^1(B) (x)_B T
    Matrix into;       // space -> three-factor chain
    std::string chain; // "k T A T B T A" or "B T A T B T k"
    Matrix ambient;    // nabla into the chain, on T
    Matrix nabla;      // nabla in space coordinates
};

// right connection for base A, left connection for base B; Leibniz and flatness recorded
Connection connection(const PreTorsorBundle& b, const DiffCalculus& calc, Report& r);

struct BimoduleConnection {
    TensorSpace domain;            // T (x)_B Omega^1(B)
    Matrix sigma;                  // domain -> left connection's space
    bool tau_right_B_linear = false;
    std::optional<Matrix> sigma_l; // T (x)_A Omega^1(A) -> Omega^1(B) (x)_B T
};

// sigma_B with its well-definedness, twisted Leibniz and agreement with psi_D;
// sigma^l when tau is right B-linear
BimoduleConnection bimodule_connection(const PreTorsorBundle& b, const Corings& c, const EntwiningData& e,
                                       const DiffCalculus& calc_a, const DiffCalculus& calc_b,
                                       const Connection& right, const Connection& left, Report& r);

Report run_diffcalc(const PreTorsorBundle& b);

} // namespace torsorkit
