#pragma once

#include "torsorkit/pretorsor.hpp"

namespace torsorkit {

class UnknownFixture : public Error {
public:
    using Error::Error;
};

// Hopf algebra over k given by structure matrices; used to emit fixtures.
struct HopfData {
    Algebra H;
    Matrix delta;   // n^2 x n
    Matrix eps;     // 1 x n
    Matrix antipode;
};

struct Fixture {
    std::string name;
    PreTorsorBundle bundle;
    // facts recomputed by the fixture's own oracle, e.g. {"C", 2}
    std::vector<std::pair<std::string, long>> oracle;
    std::optional<HopfData> hopf;
};

std::vector<std::string> fixture_names();
Fixture generate(const std::string& name, Field f = Field::rationals());

HopfData cyclic_group_hopf(Field f, std::size_t n);
HopfData sweedler_hopf(Field f);
// tau = (id (x) S (x) id)(Delta (x) id)Delta, over A = B = k
PreTorsorBundle hopf_torsor(const std::string& name, const HopfData& h);

// throws Error naming the first failing Hopf axiom
void check_hopf(const HopfData& h);

} // namespace torsorkit
