#include "torsorkit/bundle_io.hpp"

#include <map>

namespace torsorkit {

using nlohmann::json;

namespace {

const char* kFormat = "torsorkit-bundle/1";

json field_json(const Field& f)
{
    if (f.is_rational()) return "Q";
    return json{{"GF", f.characteristic()}};
}

json algebra_json(const Algebra& a)
{
    json s = json::array();
    for (const auto& [i, j, k, v] : a.constants()) s.push_back({i, j, k, a.field().format(v)});
    json u = json::array();
    for (const auto& v : a.unit().dense()) u.push_back(a.field().format(v));
    return {{"dim", a.dim()}, {"labels", a.space()->labels}, {"unit", u}, {"structure", s}};
}

// distinct algebra objects get distinct keys; the ground field is "k"
class AlgebraKeys {
public:
    std::string key(const Algebra& a)
    {
        for (const auto& [k, b] : seen_)
            if (b.same(a)) return k;
        std::string base = a.same(ground_algebra(a.field())) ? "k" : a.name();
        if (base.empty() || (base == "k" && !a.same(ground_algebra(a.field())))) base = "alg";
        std::string k = base;
        for (int i = 2; taken(k); ++i) k = base + "_" + std::to_string(i);
        seen_.emplace_back(k, a);
        return k;
    }
    json all() const
    {
        json out = json::object();
        for (const auto& [k, a] : seen_) out[k] = algebra_json(a);
        return out;
    }

private:
    bool taken(const std::string& k) const
    {
        for (const auto& s : seen_)
            if (s.first == k) return true;
        return false;
    }
    std::vector<std::pair<std::string, Algebra>> seen_;
};

std::string child(const std::string& ptr, const std::string& key)
{
    std::string esc;
    for (char c : key) {
        if (c == '~')
            esc += "~0";
        else if (c == '/')
            esc += "~1";
        else
            esc += c;
    }
    return ptr + "/" + esc;
}

std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& member(const json& obj, const std::string& ptr, const std::string& key)
{
    if (!obj.is_object()) throw ParseError(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(child(ptr, key), "missing member");
    return *it;
}

std::size_t as_size(const json& v, const std::string& ptr)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ParseError(ptr, "expected a non-negative integer");
    return v.get<std::size_t>();
}

Scalar as_scalar(const json& v, const std::string& ptr, const Field& f)
{
    if (!v.is_string()) throw ParseError(ptr, "expected a rational string \"p/q\"");
    try {
        return f.parse_scalar(v.get<std::string>());
    } catch (const Error& e) {
        throw ParseError(ptr, e.what());
    }
}

Matrix read_matrix(const json& v, const std::string& ptr, const Field& f, std::size_t rows, std::size_t cols)
{
    std::size_t r = as_size(member(v, ptr, "rows"), child(ptr, "rows"));
    std::size_t c = as_size(member(v, ptr, "cols"), child(ptr, "cols"));
    if (r != rows || c != cols)
        throw ParseError(ptr, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix, got " +
                                  std::to_string(r) + "x" + std::to_string(c));
    const json& e = member(v, ptr, "entries");
    std::string eptr = child(ptr, "entries");
    if (!e.is_array()) throw ParseError(eptr, "expected an array");
    if (e.size() != r * c) throw ParseError(eptr, "expected " + std::to_string(r * c) + " entries");
    std::vector<Scalar> vals;
    vals.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) vals.push_back(as_scalar(e[i], child(eptr, i), f));
    return Matrix::from_dense(f, r, c, vals);
}

Algebra read_algebra(const json& v, const std::string& ptr, const std::string& key, const Field& f)
{
    std::size_t n = as_size(member(v, ptr, "dim"), child(ptr, "dim"));
    if (n == 0) throw ParseError(child(ptr, "dim"), "dimension must be positive");
    std::vector<std::string> labels;
    if (v.contains("labels")) {
        const json& l = v["labels"];
        std::string lp = child(ptr, "labels");
        if (!l.is_array() || l.size() != n) throw ParseError(lp, "expected " + std::to_string(n) + " labels");
        for (std::size_t i = 0; i < n; ++i) {
            if (!l[i].is_string()) throw ParseError(child(lp, i), "expected a string");
            labels.push_back(l[i].get<std::string>());
        }
    }
    const json& u = member(v, ptr, "unit");
    std::string up = child(ptr, "unit");
    if (!u.is_array() || u.size() != n) throw ParseError(up, "expected " + std::to_string(n) + " entries");
    std::vector<Scalar> uv;
    for (std::size_t i = 0; i < n; ++i) uv.push_back(as_scalar(u[i], child(up, i), f));
    const json& s = member(v, ptr, "structure");
    std::string sp = child(ptr, "structure");
    if (!s.is_array()) throw ParseError(sp, "expected an array of [i, j, k, value]");
    std::vector<Algebra::Constant> cs;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> where;
    for (std::size_t t = 0; t < s.size(); ++t) {
        std::string tp = child(sp, t);
        if (!s[t].is_array() || s[t].size() != 4) throw ParseError(tp, "expected [i, j, k, value]");
        std::size_t idx[3];
        for (std::size_t q = 0; q < 3; ++q) {
            idx[q] = as_size(s[t][q], child(tp, q));
            if (idx[q] >= n) throw ParseError(child(tp, q), "index out of range");
        }
        auto slot = std::make_tuple(idx[0], idx[1], idx[2]);
        if (where.count(slot)) throw ParseError(tp, "repeats the triple at " + child(sp, where[slot]));
        where[slot] = t;
        cs.emplace_back(idx[0], idx[1], idx[2], as_scalar(s[t][3], child(tp, 3), f));
    }
    try {
        return make_algebra(f, n, cs, Matrix::from_dense(f, n, 1, uv), key, labels);
    } catch (const Error& e) {
        throw ParseError(ptr, e.what());
    }
}

} // namespace

std::string canonical_text(const json& doc) { return doc.dump(2) + "\n"; }

json matrix_json(const Matrix& m)
{
    json e = json::array();
    for (const auto& v : m.dense()) e.push_back(m.field().format(v));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

json export_bundle(const PreTorsorBundle& b, const std::optional<CleftData>& cleft)
{
    AlgebraKeys keys;
    json roles = {{"A", keys.key(b.A)}, {"B", keys.key(b.B)}, {"T", keys.key(b.T)}, {"torsor", b.torsor}};
    json maps = {{"alpha", matrix_json(b.alpha.matrix())},
                 {"beta", matrix_json(b.beta.matrix())},
                 {"tau", matrix_json(b.tau_hat)}};
    json doc = {{"format", kFormat}, {"name", b.name}, {"field", field_json(b.field())}, {"roles", roles},
                {"maps", maps}};
    if (cleft) {
        const CleftData& cd = *cleft;
        doc["twist"] = {{"H", keys.key(cd.H.H)},
                        {"delta", matrix_json(cd.H.delta)},
                        {"eps", matrix_json(cd.H.eps)},
                        {"antipode", matrix_json(cd.H.antipode)},
                        {"coaction", matrix_json(cd.coaction)},
                        {"j", matrix_json(cd.j)},
                        {"j_tilde", matrix_json(cd.j_tilde)},
                        {"action", matrix_json(cd.input.action)},
                        {"sigma", matrix_json(cd.input.sigma)},
                        {"sigma_tilde", matrix_json(cd.input.sigma_tilde)}};
    }
    doc["algebras"] = keys.all();
    return doc;
}

json export_fixture(const Fixture& fx)
{
    std::optional<CleftData> cd;
    try {
        cd = cleft_data(fx);
    } catch (const UnknownFixture&) {
    }
    return export_bundle(fx.bundle, cd);
}

BundleDocument import_bundle(const json& doc, std::optional<Field> field)
{
    if (!doc.is_object()) throw ParseError("", "expected an object");
    const json& fmt = member(doc, "", "format");
    if (fmt != kFormat) throw ParseError("/format", std::string("expected \"") + kFormat + "\"");
    const json& nm = member(doc, "", "name");
    if (!nm.is_string()) throw ParseError("/name", "expected a string");

    Field f;
    const json& fj = member(doc, "", "field");
    if (fj.is_string() && fj == "Q") {
        f = Field::rationals();
    } else if (fj.is_object() && fj.size() == 1 && fj.contains("GF")) {
        std::size_t p = as_size(fj["GF"], "/field/GF");
        if (!is_prime(p)) throw ParseError("/field/GF", std::to_string(p) + " is not prime");
        f = Field::gf(p);
    } else {
        throw ParseError("/field", "expected \"Q\" or {\"GF\": p}");
    }
    if (field) f = *field;

    const json& algs = member(doc, "", "algebras");
    if (!algs.is_object()) throw ParseError("/algebras", "expected an object");
    std::map<std::string, Algebra> alg;
    for (auto it = algs.begin(); it != algs.end(); ++it) {
        std::string p = child("/algebras", it.key());
        if (it.key() == "k") {
            if (as_size(member(*it, p, "dim"), child(p, "dim")) != 1)
                throw ParseError(child(p, "dim"), "the key \"k\" is reserved for the ground field");
            alg.emplace("k", ground_algebra(f));
        } else {
            alg.emplace(it.key(), read_algebra(*it, p, it.key(), f));
        }
    }
    auto lookup = [&](const json& obj, const std::string& ptr, const std::string& key) {
        const json& v = member(obj, ptr, key);
        if (!v.is_string()) throw ParseError(child(ptr, key), "expected an algebra key");
        auto it = alg.find(v.get<std::string>());
        if (it == alg.end()) throw ParseError(child(ptr, key), "no algebra '" + v.get<std::string>() + "'");
        return it->second;
    };

    const json& roles = member(doc, "", "roles");
    Algebra A = lookup(roles, "/roles", "A");
    Algebra B = lookup(roles, "/roles", "B");
    Algebra T = lookup(roles, "/roles", "T");
    bool torsor = false;
    if (roles.contains("torsor")) {
        if (!roles["torsor"].is_boolean()) throw ParseError("/roles/torsor", "expected a boolean");
        torsor = roles["torsor"].get<bool>();
    }

    const json& maps = member(doc, "", "maps");
    const std::size_t n = T.dim();
    auto read_map = [&](const json& obj, const std::string& ptr, const std::string& key, std::size_t r, std::size_t c) {
        return read_matrix(member(obj, ptr, key), child(ptr, key), f, r, c);
    };
    AlgebraMap alpha, beta;
    try {
        alpha = make_algebra_map(A, T, read_map(maps, "/maps", "alpha", n, A.dim()));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError("/maps/alpha", e.what());
    }
    try {
        beta = make_algebra_map(B, T, read_map(maps, "/maps", "beta", n, B.dim()));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError("/maps/beta", e.what());
    }
    Matrix tau = read_map(maps, "/maps", "tau", n * n * n, n);

    BundleDocument out;
    try {
        out.bundle = make_pretorsor(nm.get<std::string>(), A, B, T, alpha, beta, tau, torsor);
    } catch (const NotBimoduleMap& e) {
        throw ParseError("/maps/tau", std::string(e.what()) + " (" + e.witness + ")");
    } catch (const Error& e) {
        throw ParseError("/maps/tau", e.what());
    }

    if (doc.contains("twist")) {
        const json& tw = doc["twist"];
        const std::string tp = "/twist";
        CleftData cd;
        Algebra H = lookup(tw, tp, "H");
        const std::size_t h = H.dim(), nb = B.dim();
        cd.H.H = H;
        cd.H.delta = read_map(tw, tp, "delta", h * h, h);
        cd.H.eps = read_map(tw, tp, "eps", 1, h);
        cd.H.antipode = read_map(tw, tp, "antipode", h, h);
        try {
            check_hopf(cd.H);
        } catch (const Error& e) {
            throw ParseError(tp, e.what());
        }
        cd.coaction = read_map(tw, tp, "coaction", n * h, n);
        cd.j = read_map(tw, tp, "j", n, h);
        cd.j_tilde = read_map(tw, tp, "j_tilde", n, h);
        Matrix action = read_map(tw, tp, "action", nb, h * nb);
        cd.input = trivial_twist(out.bundle.name, cd.H, B, action);
        cd.input.sigma = read_map(tw, tp, "sigma", nb, h * h);
        cd.input.sigma_tilde = read_map(tw, tp, "sigma_tilde", nb, h * h);
        out.cleft = std::move(cd);
    }
    return out;
}

BundleDocument import_bundle_text(const std::string& text, std::optional<Field> field)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    return import_bundle(doc, field);
}

json report_json(const Report& r)
{
    json checks = json::array();
    for (const auto& c : r.checks) {
        json dims = json::object();
        for (const auto& [k, v] : c.dims) dims[k] = v;
        json o = {{"id", c.id}, {"paper_ref", c.paper_ref}, {"status", status_name(c.status)},
                  {"witnesses", c.witnesses}, {"dims", dims}};
        if (!c.note.empty()) o["note"] = c.note;
        checks.push_back(std::move(o));
    }
    return {{"subject", r.subject},
            {"field", r.field},
            {"summary",
             {{"pass", r.count(Status::Pass)},
              {"fail", r.count(Status::Fail)},
              {"hypothesis-uncertified", r.count(Status::Uncertified)}}},
            {"checks", checks}};
}

} // namespace torsorkit
