#include "torsorkit/workspace.hpp"

#include <numeric>
#include <sstream>

namespace torsorkit {

std::vector<std::string> split_spec(const std::string& spec)
{
    std::istringstream in(spec);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    if (out.size() < 3 || out.size() % 2 == 0) throw Error("malformed chain spec '" + spec + "'");
    return out;
}

Matrix permute_factors(Field f, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& perm)
{
    const std::size_t n = dims.size();
    if (perm.size() != n) throw ShapeMismatch("permutation length does not match factor count");
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    std::vector<std::size_t> odims(n);
    for (std::size_t i = 0; i < n; ++i) odims[i] = dims[perm[i]];
    // strides of the input layout
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * dims[i];
    std::vector<Matrix::Triplet> t;
    t.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t o = 0; o < total; ++o) {
        std::size_t in = 0;
        for (std::size_t i = 0; i < n; ++i) in += idx[i] * stride[perm[i]];
        t.push_back({o, in, Scalar(1)});
        for (std::size_t i = n; i-- > 0;) {
            if (++idx[i] < odims[i]) break;
            idx[i] = 0;
        }
    }
    return Matrix::from_triplets(f, total, total, t);
}

Workspace::Workspace(Field f) : field_(f)
{
    add_algebra("k", ground_algebra(f));
}

void Workspace::add_algebra(const std::string& tok, const Algebra& a)
{
    std::lock_guard lk(mu_);
    algebras_[tok] = a;
}

const Algebra& Workspace::algebra(const std::string& tok) const
{
    std::lock_guard lk(mu_);
    auto it = algebras_.find(tok);
    if (it == algebras_.end()) throw Error("unknown algebra token '" + tok + "'");
    return it->second;
}

bool Workspace::has_algebra(const std::string& tok) const
{
    std::lock_guard lk(mu_);
    return algebras_.count(tok) > 0;
}

void Workspace::add_leaf(const std::string& tok, LeafFactory make)
{
    std::lock_guard lk(mu_);
    factories_[tok] = std::move(make);
}

void Workspace::add_leaf(const std::string& tok, const Bimodule& m)
{
    std::lock_guard lk(mu_);
    fixed_[tok] = m;
}

bool Workspace::has_leaf(const std::string& tok) const
{
    std::lock_guard lk(mu_);
    return fixed_.count(tok) || factories_.count(tok);
}

void Workspace::add_ring_leaf(const std::string& tok, const Algebra& t, std::map<std::string, AlgebraMap> maps)
{
    add_leaf(tok, [t, maps, tok](const std::string& l, const std::string& r) {
        auto fl = maps.find(l), fr = maps.find(r);
        if (fl == maps.end() || fr == maps.end())
            throw Error("no structure map for " + tok + " between " + l + " and " + r);
        return via_maps(t, fl->second, fr->second, l + tok + r);
    });
}

Bimodule Workspace::leaf(const std::string& tok, const std::string& left, const std::string& right)
{
    std::lock_guard lk(mu_);
    const std::string key = left + " " + tok + " " + right;
    if (auto it = leaves_.find(key); it != leaves_.end()) return it->second;
    Bimodule m;
    if (auto it = fixed_.find(tok); it != fixed_.end()) {
        m = it->second;
        if (!m.left().same(algebra(left)) || !m.right().same(algebra(right)))
            throw ActionMismatch("leaf " + tok + " is not a " + left + "-" + right + " bimodule");
    } else if (auto f = factories_.find(tok); f != factories_.end()) {
        m = f->second(left, right);
        if (!m.left().same(algebra(left)) || !m.right().same(algebra(right)))
            throw ActionMismatch("factory for " + tok + " built the wrong sides");
    } else {
        throw Error("unknown leaf token '" + tok + "'");
    }
    leaves_[key] = m;
    return m;
}

TensorSpace Workspace::chain(const std::string& spec)
{
    std::lock_guard lk(mu_);
    auto toks = split_spec(spec);
    std::string key;
    for (auto& t : toks) key += t + " ";
    if (auto it = chains_.find(key); it != chains_.end()) return it->second;
    TensorSpace out;
    if (toks.size() == 3) {
        out = single(leaf(toks[1], toks[0], toks[2]));
    } else {
        std::string prefix;
        for (std::size_t i = 0; i + 2 < toks.size(); ++i) prefix += toks[i] + " ";
        TensorSpace head = chain(prefix);
        const std::size_t n = toks.size();
        out = extend(head, algebra(toks[n - 3]), leaf(toks[n - 2], toks[n - 3], toks[n - 1]));
    }
    chains_[key] = out;
    return out;
}

std::vector<std::size_t> Workspace::dims(const std::string& spec)
{
    auto toks = split_spec(spec);
    std::vector<std::size_t> d;
    for (std::size_t i = 1; i < toks.size(); i += 2) d.push_back(leaf(toks[i], toks[i - 1], toks[i + 1]).dim());
    return d;
}

Matrix Workspace::raw(const std::string& dom, const std::vector<LocalOp>& ops)
{
    KWord w(field_, dims(dom));
    for (const auto& o : ops) w.apply(o.pos, o.arity, o.op, o.out);
    return w.matrix();
}

Matrix Workspace::map(const std::string& dom, const std::string& cod, const std::vector<LocalOp>& ops,
                      const std::string& what)
{
    Matrix r = raw(dom, ops);
    TensorSpace c = chain(cod);
    if (r.rows() != c.ambient_dim()) throw ShapeMismatch(what + ": word does not land in " + cod);
    return induce(r, chain(dom), c, what);
}

Matrix Workspace::map_plain(const std::string& dom, const std::vector<LocalOp>& ops, const std::string& what)
{
    return induce_plain(raw(dom, ops), chain(dom), what);
}

} // namespace torsorkit
