#pragma once

#include "torsorkit/pretorsor.hpp"

namespace torsorkit {

class ClosureFailure : public Error {
public:
    using Error::Error;
};

class NotTimesAHopf : public Error {
public:
    NotTimesAHopf(std::string msg, std::size_t deficit) : Error(std::move(msg)), deficit(deficit) {}
    std::size_t deficit;
};

class TakeuchiViolation : public Error {
public:
    using Error::Error;
};

class WitnessNotIso : public Error {
public:
    using Error::Error;
};

// Right bialgebroid over R on the carrier of an R-coring, in the coring's coordinates.
//
// The workspace knows the carrier as leaf "C" with these one-sided structures,
// keyed by the neighbouring token:
//   left "R": c t(r)   right "R": c s(r)     (the coring bimodule)
//   left "Ro": t(r) c  right "Ro": c t(r)    (R^op-modules through the target)
//   left "Rs": s(r) c
// so "k C Ro C k" is the domain of theta and "R C R C R" its codomain.
struct RightBialgebroid {
    std::string name;
    Coring coring;
    Algebra ring;
    Matrix s, t; // R -> carrier, as matrices on the basis of R
    std::shared_ptr<Workspace> ws;

    const Algebra& base() const { return coring.base; }
    std::size_t dim() const { return coring.dim(); }
};

struct BialgebroidPair {
    RightBialgebroid C;
    // D is a left bialgebroid over B; stored through its opposite ring with
    // source and target exchanged, which is a right bialgebroid on the same coring
    RightBialgebroid Dop;
};

// installs the carrier workspace; no axiom is checked here
RightBialgebroid make_right_bialgebroid(std::string name, const Coring& coring, const Algebra& ring, const Matrix& s,
                                        const Matrix& t);

// product u'u (x) vv' on the coring inside T (x)_B T, checked well defined and
// closed, then every right bialgebroid axiom; records thm5.2.<C|D>.* checks
RightBialgebroid bialgebroid_C(const PreTorsorBundle& b, const Corings& c, Report& r);
RightBialgebroid bialgebroid_Dop(const PreTorsorBundle& b, const Corings& c, Report& r);

// axioms of an already assembled right bialgebroid; prefix is the check id stem
void check_bialgebroid(const RightBialgebroid& h, const std::string& prefix, Report& r, bool certified = true);

struct ThetaData {
    Matrix theta;       // "k C Ro C k" -> "R C R C R"
    Matrix theta_inv;
    Matrix translation; // c -> theta^-1(1 (x) c), carrier of "k C Ro C k"
};

// throws NotTimesAHopf with the rank deficit
ThetaData theta(const RightBialgebroid& h);
// pentagon, both displayed values of theta^-1 on 1 (x) s(a) and 1 (x) t(a), and
// multiplicativity of the translation map
void check_theta(const RightBialgebroid& h, const ThetaData& th, Report& r, bool certified = true);

// diagonal coactions on T (x)_A T and T (x)_B T; records lem5.3.* checks
void diagonal_coinvariants(const PreTorsorBundle& b, const Corings& c, Report& r, bool certified = true);

// left comodules carry a right R-action m a = eps(s(a) m_-1) m_0; right comodules
// a left one a m = m_0 eps(t(a) m_1). Both forms are computed and compared, the
// coaction is checked to land in the Takeuchi product, and the result replaces
// the comodule's module by the R-R bimodule.
Comodule comodule_actions(const Comodule& m, const RightBialgebroid& h);

// M (x)_{R^op} M' with the diagonal left coaction, for left comodules with actions installed
Comodule tensor_comodules(const Comodule& m, const Comodule& m2, const RightBialgebroid& h);
// the monoidal unit for left comodules: R with coaction r -> t(r) (x) 1
Comodule unit_comodule(const RightBialgebroid& h);
// C (x)_R N with the coaction of its first factor, for a left R-module N given as an R-k bimodule
Comodule induced_comodule(const RightBialgebroid& h, const Bimodule& n);

struct MonoidalWitness {
    Matrix xi0;         // B -> T□A, in cotensor coordinates
    std::size_t cot_A = 0;
    bool xi0_bijective = false;
};

// xi_0; requires the bialgebroid on C and T's coaction
MonoidalWitness monoidal_unit_witness(const PreTorsorBundle& b, const Corings& c, const RightBialgebroid& h);

struct XiData {
    Matrix xi;           // (T□M) (x)_B (T□M') -> T□(M (x)_{R^op} M'), in cotensor coordinates
    std::size_t dom_dim = 0, cod_dim = 0;
    bool bijective = false;
};

// xi_{M,M'}; M and M' must have their actions installed
XiData monoidal_witness(const PreTorsorBundle& b, const Corings& c, const RightBialgebroid& h, const Comodule& m,
                        const Comodule& m2);

// can rebuilt from xi_{C,C}; true when it equals the canonical map
bool can_factorization(const PreTorsorBundle& b, const Corings& c, const GaloisData& g, const RightBialgebroid& h);

struct LemmaIsoData {
    Matrix forward, backward;
    std::size_t dim = 0;
};

// the bijection T□((C (x) N) (x)_{R^op} (C (x) M)) -> (T (x) C (x) N) (x) M and its inverse
// through the translation map; N and M are left R-modules as R-k bimodules
LemmaIsoData lemma_iso(const PreTorsorBundle& b, const Corings& c, const RightBialgebroid& h, const ThetaData& th,
                       const Bimodule& n, const Bimodule& m);

// everything in this module as checks; run_build's corings are rebuilt
Report run_bialgebroid(const PreTorsorBundle& b, bool include_large = true);

} // namespace torsorkit
