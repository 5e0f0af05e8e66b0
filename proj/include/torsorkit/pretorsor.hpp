#pragma once

#include <memory>
#include <optional>

#include "torsorkit/coring.hpp"
#include "torsorkit/report.hpp"
#include "torsorkit/workspace.hpp"

namespace torsorkit {

class NotBimoduleMap : public Error {
public:
    NotBimoduleMap(std::string msg, std::string witness) : Error(std::move(msg)), witness(std::move(witness)) {}
    std::string witness;
};

class CoproductDoesNotCorestrict : public Error {
public:
    using Error::Error;
};

class CounitNotInImageOfUnit : public Error {
public:
    using Error::Error;
};

class AlphaNotInjective : public Error {
public:
    using Error::Error;
};

class NotGalois : public Error {
public:
    NotGalois(std::string msg, std::size_t deficit) : Error(std::move(msg)), deficit(deficit) {}
    std::size_t deficit;
};

class CharacterizationsDisagree : public Error {
public:
    CharacterizationsDisagree(std::string msg, std::size_t d1, std::size_t d2, std::size_t d3)
        : Error(std::move(msg)), dims{d1, d2, d3} {}
    std::size_t dims[3];
};

class IsoFailure : public Error {
public:
    using Error::Error;
};

// A-B pre-torsor data. T is a B-A bimodule through beta on the left and alpha
// on the right; tau lands in the carrier of T (x)_A T (x)_B T, chain "B T A T B T A"
// of the workspace.
struct PreTorsorBundle {
    std::string name;
    Algebra A, B, T;
    AlgebraMap alpha, beta;
    Matrix tau;
    Matrix tau_hat;          // k-level lift of tau
    bool torsor = false;     // Def 5.1 checks requested
    std::shared_ptr<Workspace> ws;

    std::size_t n() const { return T.dim(); }
    const Field& field() const { return T.field(); }
    std::string label(std::size_t i) const;
};

// tau_k is a k-level map T -> T (x) T (x) T; it is projected and checked to be B-A bilinear
PreTorsorBundle make_pretorsor(std::string name, const Algebra& A, const Algebra& B, const Algebra& T,
                               const AlgebraMap& alpha, const AlgebraMap& beta, const Matrix& tau_k,
                               bool torsor = false);
// tau given directly on the carrier
PreTorsorBundle make_pretorsor_carrier(std::string name, const Algebra& A, const Algebra& B, const Algebra& T,
                                       const AlgebraMap& alpha, const AlgebraMap& beta, const Matrix& tau,
                                       bool torsor = false);

// Def 3.1 (a)-(c); sets unital
Report validate_pretorsor(const PreTorsorBundle& b, bool* unital = nullptr);
// Def 5.1 (a)-(d), with the commuting of alpha(A) and beta(B) folded into (a) and (b)
Report validate_torsor(const PreTorsorBundle& b);

// Freeness certificates standing in for the flatness hypotheses.
struct Hypotheses {
    bool T_right_A = false;
    bool T_left_B = false;
    bool T_right_B = false;
    bool T_left_A = false;
    bool certified() const { return T_right_A && T_left_B; }
};
Hypotheses certify_hypotheses(const PreTorsorBundle& b);

struct Corings {
    Subspace C_sub; // in the carrier of "A T B T A"
    Subspace D_sub; // in the carrier of "B T A T B"
    Matrix LC, LD;  // k-level lifts of the bases
    Matrix omega;
    Coring C, D;
    std::optional<GroupLike> gC, gD;
    Comodule rhoT; // right C-coaction on T, tau corestricted to T (x)_A C
    Comodule lamT; // left D-coaction on T, tau corestricted to D (x)_B T
};

// registers leaves "C" and "D" in the bundle workspace
Corings build_corings(const PreTorsorBundle& b);

struct GaloisData {
    Matrix can, can_inv, chi;
};

// can for an arbitrary right coaction of a coring over A on T
Matrix canonical_map(const PreTorsorBundle& b, const Comodule& rho);
GaloisData galois(const PreTorsorBundle& b, const Corings& c);
// tau rebuilt as (T (x)_A chi) rho
Matrix reconstruct_tau(const PreTorsorBundle& b, const Corings& c, const GaloisData& g);

struct EntwiningData {
    Matrix psiC; // C (x)_A T -> T (x)_A C, chains "A C A T A" -> "A T A C A"
    Matrix psiD; // T (x)_B D -> D (x)_B T, chains "B T B D B" -> "B D B T B"
    std::optional<Matrix> psiC_inv, psiD_inv;
};

EntwiningData entwining(const PreTorsorBundle& b, const Corings& c, Report& r);

struct TbarData {
    Subspace tbar;       // in the carrier of "A T B T A T B"
    Subspace via_D, via_C, meet;
    Matrix L;            // k-level lift of the basis
    Comodule leftC;      // T̄ -> C (x)_A T̄
    Comodule rightD;     // T̄ -> T̄ (x)_B D
};

// registers leaf "Tb"
TbarData tbar(const PreTorsorBundle& b, const Corings& c, const EntwiningData& e, Report& r);

struct IsoData {
    Matrix varpi, varpi_inv;          // T□_C T̄ <-> D
    Matrix varpi_sym, varpi_sym_inv;  // T̄□_D T <-> C
    std::optional<Matrix> taubar;     // T -> T̄ when both entwinings invert
};

IsoData structure_isos(const PreTorsorBundle& b, const Corings& c, const GaloisData& g, const EntwiningData& e,
                       const TbarData& t, Report& r);

// T̄□_D(T□_C M) ≅ M for a left C-comodule M, and T□_C(T̄□_D N) ≅ N for a left D-comodule N.
// Returns the dimension of the composite.
std::size_t equivalence_witness_C(const PreTorsorBundle& b, const Corings& c, const TbarData& t, const Comodule& m);
std::size_t equivalence_witness_D(const PreTorsorBundle& b, const Corings& c, const TbarData& t, const Comodule& n);

// Lemma 3.8 map D-coring C -> Ct for a right Ct-coaction on T; checked as a coring
// morphism. Ct must be registered as leaf "Ct".
Matrix kappa(const PreTorsorBundle& b, const Corings& c, const Comodule& rho);

// left C-comodules used as equivalence inputs
Comodule grouplike_comodule(const PreTorsorBundle& b, const Corings& c, const Matrix& g);
Comodule direct_sum(const Comodule& x, const Comodule& y);

// everything above, as checks
Report run_build(const PreTorsorBundle& b);

} // namespace torsorkit
