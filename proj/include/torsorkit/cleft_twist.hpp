#pragma once

#include "torsorkit/bialgebroid.hpp"
#include "torsorkit/fixtures.hpp"

namespace torsorkit {

class AxiomFailure : public Error {
public:
    using Error::Error;
};

// Twisting data over L = k. H is a Hopf algebra, so a left x_k-Hopf algebra whose
// Galois inverse on h (x) 1 is given by theta_plus.
struct TwistInput {
    std::string name;
    HopfData H;
    Matrix theta_plus;         // H -> H (x) H, h -> h^{+1} (x) h^{+2}
    Algebra B;
    Matrix action;             // H (x) B -> B, dimB x (dimH dimB)
    Matrix sigma, sigma_tilde; // H (x) H -> B
};

// h -> h_(1) (x) S(h_(2))
Matrix hopf_theta_plus(const HopfData& h);
// sigma = eps (x) eps and the trivial measuring h.b = eps(h) b
TwistInput trivial_twist(std::string name, const HopfData& h, const Algebra& b, const Matrix& action);
// the group-algebra cocycle on k[Z/2] with sigma(g,g) = -1, B = L = k
TwistInput sign_cocycle_input(Field f);

// Left bialgebroid: coring over the base with b.d.b' = s(b) t(b') d.
struct LeftBialgebroid {
    std::string name;
    Algebra ring;
    Matrix s, t;
    Coring coring;

    const Algebra& base() const { return coring.base; }
    std::size_t dim() const { return ring.dim(); }
};

// ring^op with source and target exchanged is a right bialgebroid on the same coring
RightBialgebroid opposite(const LeftBialgebroid& d);
void check_left_bialgebroid(const LeftBialgebroid& d, const std::string& prefix, Report& r);

struct TwistedBialgebroid {
    LeftBialgebroid D;  // carrier B (x) B (x) H, basis index (b * dimB + b') * dimH + h
    TensorSpace dom;    // D (x)_{B^op} D
    Matrix galois;      // dom -> D (x)_B D
    Matrix galois_inv;  // from the displayed formula
};

// records <prefix>.* checks; throws AxiomFailure when no bialgebroid can be formed
TwistedBialgebroid twisted_bialgebroid(const TwistInput& in, Report& r, const std::string& prefix = "propA.1");

// product s(sigma(h_(1),h'_(1))) t(sigma~(h_(3),h'_(3))) h_(2) h'_(2) on H over k; records remA.2.double-twist.*
LeftBialgebroid cocycle_double_twist(const TwistInput& in, Report& r);
// the automorphism of H from D (with B = L) onto the double twist; records remA.2.iso.*
void double_twist_iso(const TwistInput& in, const TwistedBialgebroid& d, const LeftBialgebroid& twist, Report& r);

// cleft extension data for a fixture with A = L = k
struct CleftData {
    HopfData H;
    Matrix coaction;   // T -> T (x) H
    Matrix j, j_tilde; // H -> T, normalised cleaving map and its convolution inverse
    TwistInput input;
};

// EX-TRIV, EX-C2 and EX-SMASH; throws UnknownFixture otherwise
CleftData cleft_data(const Fixture& fx);

struct CleftIso {
    Matrix forward, backward; // (T (x)_A T)^coH in D_sub coordinates <-> B (x) B (x) H
    std::size_t dim = 0;
};

// both maps of the cleft isomorphism, checked inverse and structure preserving; records thmA.3.*
CleftIso cleft_iso_check(const PreTorsorBundle& b, const CleftData& cd, const TwistedBialgebroid& d, Report& r);

// every check of this module for a fixture that has cleft data, plus the sign cocycle example
Report run_twist(const Fixture& fx);
Report run_twist(const PreTorsorBundle& b, const CleftData& cd);

} // namespace torsorkit
