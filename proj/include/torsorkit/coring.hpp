#pragma once

#include <optional>

#include "torsorkit/algcore.hpp"

namespace torsorkit {

class NotCoassociative : public Error {
public:
    NotCoassociative(std::string msg, std::size_t basis) : Error(std::move(msg)), basis(basis) {}
    std::size_t basis;
};

class NotCounital : public Error {
public:
    NotCounital(std::string msg, std::size_t basis) : Error(std::move(msg)), basis(basis) {}
    std::size_t basis;
};

class NotBilinear : public Error {
public:
    NotBilinear(std::string msg, std::size_t basis) : Error(std::move(msg)), basis(basis) {}
    std::size_t basis;
};

class NotGroupLike : public Error {
public:
    using Error::Error;
};

class NotColinear : public Error {
public:
    using Error::Error;
};

class NotCounitPreserving : public Error {
public:
    using Error::Error;
};

class NotComodule : public Error {
public:
    using Error::Error;
};

// A-coring: comonoid in A-A bimodules.
struct Coring {
    Algebra base;
    Bimodule carrier;       // A-A bimodule
    TensorSpace cc;         // carrier (x)_A carrier
    TensorSpace ccc;        // carrier (x)_A carrier (x)_A carrier
    Matrix delta;           // carrier -> cc
    Matrix eps;             // carrier -> base
    std::size_t dim() const { return carrier.dim(); }
};

Coring make_coring(const Algebra& base, const Bimodule& carrier, const Matrix& delta, const Matrix& eps);
// B as a trivial B-coring
Coring trivial_coring(const Algebra& b);

// (Delta (x) C) and (C (x) Delta) as maps cc -> ccc
Matrix delta_left(const Coring& c);
Matrix delta_right(const Coring& c);

struct GroupLike {
    Matrix element;
};

GroupLike check_grouplike(const Coring& c, const Matrix& g);

enum class CoSide { Right, Left };

// Right comodule: rho: M -> M (x)_A C.  Left comodule: rho: M -> C (x)_A M.
struct Comodule {
    Coring coring;
    Bimodule module; // acting algebra on the coring side is the coring base
    CoSide side;
    TensorSpace target;
    Matrix rho;
};

Comodule make_comodule(const Coring& c, const Bimodule& m, CoSide side, const Matrix& rho);
Comodule regular_comodule(const Coring& c, CoSide side);

struct Bicomodule {
    Comodule left;  // over the left coring
    Comodule right; // over the right coring, same carrier
};

// checks (D (x) rho_right) rho_left == (rho_left (x) C) rho_right
Bicomodule make_bicomodule(const Comodule& left, const Comodule& right);

struct Cotensor {
    TensorSpace ambient; // M (x)_A N
    Subspace sub;        // kernel of rho (x) N - M (x) rho inside ambient.carrier
};

Cotensor cotensor(const Comodule& m, const Comodule& n);

// kernel of rho - (m -> m (x) g) for a right comodule (g (x) m for a left one)
Subspace coinvariants(const Comodule& m, const GroupLike& g);
// kernel of rho - reference, with reference a map of the same shape
Subspace coinvariants(const Comodule& m, const Matrix& reference);

// checks bilinearity, colinearity and counit preservation
void coring_morphism(const Matrix& kappa, const Coring& c, const Coring& c2);

} // namespace torsorkit
