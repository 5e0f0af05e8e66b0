// torsorkit command line front end
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "torsorkit/bundle_io.hpp"
#include "torsorkit/diffcalc.hpp"

using namespace torsorkit;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kChecksFailed = 1, kParse = 2 };

struct Options {
    std::string fixture, input, field, json_out;
    bool dump = false;
};

struct Target {
    std::string name;
    std::optional<Fixture> fx; // set when the target comes from the generator
    PreTorsorBundle bundle;
    std::optional<CleftData> cleft;
};

std::optional<Field> field_option(const Options& o)
{
    if (o.field.empty()) return std::nullopt;
    return Field::parse(o.field);
}

Target from_fixture(const std::string& name, const Field& f)
{
    Target t;
    t.name = name;
    t.fx = generate(name, f);
    t.bundle = t.fx->bundle;
    try {
        t.cleft = cleft_data(*t.fx);
    } catch (const UnknownFixture&) {
    }
    return t;
}

Target from_file(const std::string& path, std::optional<Field> f)
{
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    BundleDocument d = import_bundle_text(ss.str(), f);
    Target t;
    t.name = d.bundle.name;
    t.bundle = std::move(d.bundle);
    t.cleft = std::move(d.cleft);
    return t;
}

Report guarded(const std::string& stage, const PreTorsorBundle& b, const std::function<Report()>& run)
{
    try {
        return run();
    } catch (const std::exception& e) {
        // a construction that throws past its own checks is reported, never swallowed
        Report r;
        r.subject = b.name;
        r.field = b.field().name();
        r.fail(stage + ".aborted", {e.what()});
        return r;
    }
}

Report validate(const PreTorsorBundle& b)
{
    Report r = validate_pretorsor(b);
    if (b.torsor) r.append(validate_torsor(b));
    return r;
}

Report run_stage(const std::string& cmd, const Target& t)
{
    const PreTorsorBundle& b = t.bundle;
    if (cmd == "validate") return guarded("validate", b, [&] { return validate(b); });
    if (cmd == "build") return guarded("build", b, [&] { return run_build(b); });
    if (cmd == "bialgebroid") return guarded("bialgebroid", b, [&] { return run_bialgebroid(b); });
    if (cmd == "diffcalc") return guarded("diffcalc", b, [&] { return run_diffcalc(b); });
    if (cmd == "twist") return guarded("twist", b, [&] { return run_twist(b, *t.cleft); });
    throw std::logic_error("unknown stage " + cmd);
}

json dump_matrices(const Target& t, bool with_corings)
{
    const PreTorsorBundle& b = t.bundle;
    json m = {{"alpha", matrix_json(b.alpha.matrix())},
              {"beta", matrix_json(b.beta.matrix())},
              {"tau", matrix_json(b.tau)},
              {"tau_hat", matrix_json(b.tau_hat)}};
    if (with_corings) {
        try {
            Corings c = build_corings(b);
            m["C_basis"] = matrix_json(c.C_sub.basis());
            m["D_basis"] = matrix_json(c.D_sub.basis());
            GaloisData g = galois(b, c);
            m["can"] = matrix_json(g.can);
            m["can_inv"] = matrix_json(g.can_inv);
        } catch (const Error& e) {
            m["unavailable"] = e.what();
        }
    }
    return m;
}

struct Outcome {
    std::vector<Report> reports;
    json matrices;
};

Outcome run_target(const std::string& cmd, const Target& t, bool dump)
{
    Outcome o;
    std::vector<std::string> stages;
    if (cmd == "suite") {
        stages = {"validate", "build", "bialgebroid"};
        if (t.cleft) stages.push_back("twist");
        stages.push_back("diffcalc");
    } else {
        stages = {cmd};
    }
    for (const auto& s : stages) {
        Report r = run_stage(s, t);
        if (r.subject.empty()) r.subject = t.name;
        o.reports.push_back(std::move(r));
    }
    if (dump) o.matrices = dump_matrices(t, cmd != "validate");
    return o;
}

std::size_t thread_cap()
{
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* e = std::getenv("TORSORKIT_THREADS")) {
        try {
            long v = std::stol(e);
            if (v >= 1) n = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return n;
}

// results land in the slot of their target, so the report order never depends on scheduling
std::vector<Outcome> run_all(const std::string& cmd, const std::vector<std::function<Target()>>& makers, bool dump)
{
    std::vector<Outcome> out(makers.size());
    std::vector<std::string> errors(makers.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < makers.size();) {
            try {
                out[i] = run_target(cmd, makers[i](), dump);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::size_t nt = std::min(thread_cap(), makers.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);
    return out;
}

void print_report(const Report& r, std::ostream& os)
{
    for (const auto& c : r.checks) {
        std::string tag = c.status == Status::Pass ? "PASS" : c.status == Status::Fail ? "FAIL" : "UNCERTIFIED";
        os << "  " << tag << "  " << c.id << "  [" << c.paper_ref << "]";
        for (const auto& [k, v] : c.dims) os << " " << k << "=" << v;
        os << "\n";
        for (const auto& w : c.witnesses) os << "        witness: " << w << "\n";
        if (!c.note.empty() && c.status != Status::Pass) os << "        note: " << c.note << "\n";
    }
    os << r.subject << " [" << r.field << "]: " << r.count(Status::Pass) << " pass, " << r.count(Status::Fail)
       << " fail, " << r.count(Status::Uncertified) << " hypothesis-uncertified\n";
}

void write_text(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

int run_command(const std::string& cmd, const Options& o)
{
    std::optional<Field> field = field_option(o);
    if (!o.fixture.empty() && !o.input.empty()) throw ParseError("", "--fixture and --input are exclusive");

    std::vector<std::function<Target()>> makers;
    Field f = field.value_or(Field::rationals());
    if (!o.input.empty()) {
        // parse up front so a bad document exits with a parse error, not a check failure
        auto t = std::make_shared<Target>(from_file(o.input, field));
        makers.push_back([t] { return *t; });
    } else if (!o.fixture.empty()) {
        auto t = std::make_shared<Target>(from_fixture(o.fixture, f));
        makers.push_back([t] { return *t; });
    } else if (cmd == "suite") {
        for (const auto& n : fixture_names()) makers.push_back([n, f] { return from_fixture(n, f); });
    } else {
        throw ParseError("", "one of --fixture or --input is required");
    }
    if (cmd == "twist" && makers.size() == 1) {
        Target t = makers[0]();
        if (!t.cleft) throw ParseError("/twist", "no twist inputs for '" + t.name + "'");
    }

    std::vector<Outcome> outs = run_all(cmd, makers, o.dump);
    // keep stdout clean for the JSON when it goes there
    std::ostream& human = o.json_out == "-" ? std::cerr : std::cout;
    json reports = json::array();
    std::size_t pass = 0, fail = 0, unc = 0;
    for (const auto& out : outs) {
        for (const auto& r : out.reports) {
            human << "== " << cmd << " " << r.subject << "\n";
            print_report(r, human);
            json j = report_json(r);
            if (o.dump && !out.matrices.is_null()) j["matrices"] = out.matrices;
            reports.push_back(std::move(j));
            pass += r.count(Status::Pass);
            fail += r.count(Status::Fail);
            unc += r.count(Status::Uncertified);
        }
    }
    human << "total: " << pass << " pass, " << fail << " fail, " << unc << " hypothesis-uncertified\n";
    if (!o.json_out.empty()) {
        json doc = {{"command", cmd},
                    {"reports", reports},
                    {"summary", {{"pass", pass}, {"fail", fail}, {"hypothesis-uncertified", unc}}}};
        write_text(o.json_out, canonical_text(doc));
    }
    return fail ? kChecksFailed : kOk;
}

int export_command(const std::string& name, const Options& o)
{
    Field f = field_option(o).value_or(Field::rationals());
    std::string text = canonical_text(export_fixture(generate(name, f)));
    write_text(o.json_out.empty() ? "-" : o.json_out, text);
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact verification of pre-torsors, their corings and bialgebroids"};
    app.require_subcommand(1);
    Options o;
    std::string export_name;

    auto common = [&](CLI::App* sub, bool source) {
        if (source) {
            auto* fx = sub->add_option("--fixture", o.fixture, "built-in fixture name");
            auto* in = sub->add_option("--input", o.input, "bundle document (JSON)");
            fx->excludes(in);
        }
        sub->add_option("--field", o.field, "Q or GFp, e.g. GF101");
        sub->add_flag("--dump-matrices", o.dump, "include matrices in the JSON report");
        sub->add_option("--json", o.json_out, "write the JSON report here ('-' for stdout)");
    };
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"validate", "pre-torsor and torsor axioms"},
        {"build", "corings, Galois map, entwinings, the dual bundle and the structure isomorphisms"},
        {"bialgebroid", "bialgebroids, theta, diagonal coinvariants and monoidal witnesses"},
        {"twist", "twisted bialgebroid and the cleft isomorphism"},
        {"diffcalc", "first-order calculi and connections"},
        {"suite", "every pipeline on every fixture, or on the given bundle"}};
    for (const auto& [name, help] : commands) common(app.add_subcommand(name, help), true);
    CLI::App* fixture = app.add_subcommand("fixture", "export a built-in fixture as a bundle document");
    fixture->add_option("name", export_name, "fixture name")->required();
    common(fixture, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kParse;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (sub == fixture) return export_command(export_name, o);
        return run_command(sub->get_name(), o);
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << e.what() << "\n";
        return kParse;
    } catch (const UnknownFixture& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const FieldError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kChecksFailed;
    }
}
