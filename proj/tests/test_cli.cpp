#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsorkit/bundle_io.hpp"

using namespace torsorkit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch()
{
    fs::path d = fs::temp_directory_path() / ("torsorkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

int run(const std::string& args, const std::string& env = "")
{
    std::string cmd = env + " " + TORSORKIT_CLI + std::string(" ") + args + " >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

} // namespace

TEST_CASE("validate on an exported EX-C2 bundle")
{
    fs::path d = scratch();
    REQUIRE(run("fixture EX-C2 --json " + q(d / "c2.json")) == 0);
    CHECK(run("validate --input " + q(d / "c2.json") + " --json " + q(d / "r.json")) == 0);
    json r = json::parse(slurp(d / "r.json"));
    CHECK(r["summary"]["pass"] == 7);
    CHECK(r["summary"]["fail"] == 0);
    const json& checks = r["reports"][0]["checks"];
    REQUIRE(checks.size() == 7);
    CHECK(checks[0]["id"] == "def3.1.a");
    CHECK(checks[0]["paper_ref"] == "Def 3.1 (a)");
    CHECK(checks[6]["id"] == "def5.1.d");
    for (const auto& c : checks) {
        CHECK(c.contains("witnesses"));
        CHECK(c.contains("dims"));
    }
}

TEST_CASE("suite on EX-TRIV exits cleanly")
{
    CHECK(run("suite --fixture EX-TRIV") == 0);
}

TEST_CASE("a perturbed tau entry is caught with witness g")
{
    fs::path d = scratch();
    json doc = export_fixture(generate("EX-C2"));
    // row g (x) g (x) g, column g
    doc["maps"]["tau"]["entries"][7 * 2 + 1] = "2/1";
    write(d / "bad.json", canonical_text(doc));
    CHECK(run("validate --input " + q(d / "bad.json") + " --json " + q(d / "r.json")) == 1);
    json r = json::parse(slurp(d / "r.json"));
    bool found = false;
    for (const auto& c : r["reports"][0]["checks"])
        if (c["id"] == "def3.1.b") {
            CHECK(c["status"] == "fail");
            CHECK(c["witnesses"] == json::array({"g"}));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("parse errors exit 2 with a JSON pointer")
{
    json good = export_fixture(generate("EX-C2"));

    json doc = good;
    doc["maps"]["alpha"]["entries"][1] = "one";
    try {
        import_bundle(doc);
        FAIL("accepted a non-rational entry");
    } catch (const ParseError& e) {
        CHECK(e.pointer == "/maps/alpha/entries/1");
    }

    doc = good;
    doc["roles"].erase("B");
    CHECK_THROWS_AS(import_bundle(doc), ParseError);
    try {
        import_bundle(doc);
    } catch (const ParseError& e) {
        CHECK(e.pointer == "/roles/B");
    }

    doc = good;
    doc["field"] = json{{"GF", 100}};
    try {
        import_bundle(doc);
        FAIL("accepted GF(100)");
    } catch (const ParseError& e) {
        CHECK(e.pointer == "/field/GF");
    }

    // e * g = e breaks associativity or the unit, caught at the algebra
    doc = good;
    std::string key = good["roles"]["T"];
    REQUIRE(key == "k[Z/2]");
    doc["algebras"][key]["structure"][1][2] = 0;
    try {
        import_bundle(doc);
        FAIL("accepted a broken multiplication table");
    } catch (const ParseError& e) {
        CHECK(e.pointer == "/algebras/k[Z~12]");
    }

    fs::path d = scratch();
    write(d / "trunc.json", "{\"format\": ");
    CHECK(run("validate --input " + q(d / "trunc.json")) == 2);
    write(d / "bad.json", canonical_text(doc));
    CHECK(run("validate --input " + q(d / "bad.json")) == 2);
    CHECK(run("validate --fixture EX-NOPE") == 2);
    CHECK(run("validate --fixture EX-C2 --field GF100") == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("export then import is byte stable")
{
    for (const auto& name : fixture_names())
        for (Field f : {Field::rationals(), Field::gf(101)}) {
            CAPTURE(name);
            std::string t1 = canonical_text(export_fixture(generate(name, f)));
            BundleDocument d = import_bundle_text(t1);
            std::string t2 = canonical_text(export_bundle(d.bundle, d.cleft));
            CHECK(t1 == t2);
            CHECK(d.bundle.tau == generate(name, f).bundle.tau);
        }
}

TEST_CASE("the field flag reduces an imported document")
{
    BundleDocument d = import_bundle(export_fixture(generate("EX-SW")), Field::gf(101));
    CHECK(d.bundle.field() == Field::gf(101));
    CHECK(!validate_pretorsor(d.bundle).failed());
}

TEST_CASE("twist reads its inputs from the document")
{
    fs::path d = scratch();
    REQUIRE(run("fixture EX-SMASH --json " + q(d / "sm.json")) == 0);
    CHECK(run("twist --input " + q(d / "sm.json") + " --json " + q(d / "r.json")) == 0);
    json r = json::parse(slurp(d / "r.json"));
    CHECK(r["summary"]["fail"] == 0);
    REQUIRE(run("fixture EX-SW --json " + q(d / "sw.json")) == 0);
    CHECK(run("twist --input " + q(d / "sw.json")) == 2);
}

TEST_CASE("report order does not depend on the thread count")
{
    fs::path d = scratch();
    CHECK(run("suite --json " + q(d / "one.json"), "TORSORKIT_THREADS=1") == 1);
    CHECK(run("suite --json " + q(d / "many.json"), "TORSORKIT_THREADS=4") == 1);
    CHECK(slurp(d / "one.json") == slurp(d / "many.json"));
    json r = json::parse(slurp(d / "one.json"));
    // EX-M2 is the only bundle with failures
    for (const auto& rep : r["reports"])
        if (rep["summary"]["fail"] != 0) CHECK(rep["subject"] == "EX-M2");
}

TEST_CASE("matrices are only dumped on request")
{
    fs::path d = scratch();
    CHECK(run("build --fixture EX-C2 --json " + q(d / "plain.json")) == 0);
    CHECK(!json::parse(slurp(d / "plain.json"))["reports"][0].contains("matrices"));
    CHECK(run("build --fixture EX-C2 --dump-matrices --json " + q(d / "dump.json")) == 0);
    json m = json::parse(slurp(d / "dump.json"))["reports"][0]["matrices"];
    CHECK(m["can"]["rows"] == 4);
    CHECK(m["C_basis"]["cols"] == 2);
    fs::remove_all(d);
}
