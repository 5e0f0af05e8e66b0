#include "doctest.h"

#include <iostream>

#include "oracle.hpp"
#include "torsorkit/fixtures.hpp"

using namespace torsorkit;

namespace {

long oracle_dim(const Fixture& fx, const std::string& key)
{
    for (const auto& [k, v] : fx.oracle)
        if (k == key) return v;
    return -1;
}

void print_failures(const Report& r)
{
    for (const auto& c : r.checks)
        if (c.status == Status::Fail) {
            std::cerr << r.subject << " " << c.id << ":";
            for (const auto& w : c.witnesses) std::cerr << " [" << w << "]";
            std::cerr << "\n";
        }
}

} // namespace

TEST_CASE("fixtures validate as torsors")
{
    for (const char* name : {"EX-TRIV", "EX-C2", "EX-SW"}) {
        Fixture fx = generate(name);
        bool unital = false;
        Report r = validate_pretorsor(fx.bundle, &unital);
        r.append(validate_torsor(fx.bundle));
        print_failures(r);
        CHECK(r.checks.size() == 7);
        CHECK(r.count(Status::Pass) == 7);
        CHECK(unital);
    }
}

TEST_CASE("EX-M2 is a pre-torsor but its unit maps do not commute")
{
    Fixture fx = generate("EX-M2");
    Report r = validate_pretorsor(fx.bundle);
    CHECK(r.count(Status::Pass) == 3);
    Report t = validate_torsor(fx.bundle);
    CHECK(t.find("def5.1.a")->status == Status::Fail);
    CHECK(t.find("def5.1.b")->status == Status::Fail);
    CHECK(t.find("def5.1.c")->status == Status::Fail);
    CHECK(t.find("def5.1.d")->status == Status::Pass);
}

TEST_CASE("perturbed tau on EX-C2 fails axiom (b) at g")
{
    Fixture fx = generate("EX-C2");
    const PreTorsorBundle& b = fx.bundle;
    // tau(g) = g (x) e (x) g
    Matrix tau_k = Matrix::from_triplets(b.field(), 8, 2, {{0, 0, Scalar(1)}, {4 + 1, 1, Scalar(1)}});
    PreTorsorBundle bad = make_pretorsor("bad", b.A, b.B, b.T, b.alpha, b.beta, tau_k);
    Report r = validate_pretorsor(bad);
    const Check* c = r.find("def3.1.b");
    REQUIRE(c);
    CHECK(c->status == Status::Fail);
    REQUIRE(c->witnesses.size() == 1);
    CHECK(c->witnesses[0] == "g");
}

TEST_CASE("corings of EX-C2")
{
    Fixture fx = generate("EX-C2");
    Corings c = build_corings(fx.bundle);
    CHECK(c.C.dim() == 2);
    CHECK(c.D.dim() == 2);
    CHECK(oracle_dim(fx, "C") == 2);
    // basis {e (x) e, g (x) g} in the 4-dim T (x) T
    Matrix expect = Matrix::from_triplets(fx.bundle.field(), 4, 2, {{0, 0, Scalar(1)}, {3, 1, Scalar(1)}});
    CHECK(c.C_sub.basis() == expect);
    REQUIRE(c.gC);
    CHECK(c.C.eps == Matrix::from_dense(fx.bundle.field(), 1, 2, {Scalar(1), Scalar(1)}));
    CHECK_NOTHROW(check_grouplike(c.C, Matrix::unit_vector(fx.bundle.field(), 2, 1)));

    GaloisData g = galois(fx.bundle, c);
    CHECK(g.can.rows() == 4);
    CHECK(g.can.cols() == 4);
    // chi(e (x) e) = e (x) e, chi(g (x) g) = g (x) g
    CHECK(g.chi == expect);
    CHECK(reconstruct_tau(fx.bundle, c, g) == fx.bundle.tau);
}

TEST_CASE("build runs clean on the torsor fixtures")
{
    for (const char* name : {"EX-TRIV", "EX-C2", "EX-SW", "EX-M2", "EX-Q(3)", "EX-SMASH"}) {
        Fixture fx = generate(name);
        Report r = run_build(fx.bundle);
        print_failures(r);
        CHECK_MESSAGE(!r.failed(), name);
        Corings c = build_corings(fx.bundle);
        if (oracle_dim(fx, "C") >= 0) CHECK(static_cast<long>(c.C.dim()) == oracle_dim(fx, "C"));
        if (oracle_dim(fx, "D") >= 0) CHECK(static_cast<long>(c.D.dim()) == oracle_dim(fx, "D"));
        const Check* tb = r.find("prop4.1.tbar");
        REQUIRE(tb);
        if (oracle_dim(fx, "Tbar") >= 0) CHECK(tb->dims[0].second == oracle_dim(fx, "Tbar"));
    }
}
