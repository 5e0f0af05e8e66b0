#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "torsorkit/algcore.hpp"

namespace torsorkit {

// One local operation of a k-level word: factors [pos, pos+arity) are replaced
// by op's output, whose factor dimensions are out.
struct LocalOp {
    std::size_t pos;
    std::size_t arity;
    Matrix op;
    std::vector<std::size_t> out;
};

// Named algebras and bimodules, and cached balanced tensor chains over them.
//
// A chain spec alternates algebra and leaf tokens, "B T A T B": the leaf T
// between B and A is resolved as a B-A bimodule. Leaves are either fixed
// bimodules or factories called with the neighbouring algebra tokens.
class Workspace {
public:
    using LeafFactory = std::function<Bimodule(const std::string& left, const std::string& right)>;

    explicit Workspace(Field f);

    const Field& field() const { return field_; }

    void add_algebra(const std::string& tok, const Algebra& a);
    const Algebra& algebra(const std::string& tok) const;
    bool has_algebra(const std::string& tok) const;

    void add_leaf(const std::string& tok, LeafFactory make);
    void add_leaf(const std::string& tok, const Bimodule& m);
    bool has_leaf(const std::string& tok) const;
    // T with its left and right structures through algebra maps into T,
    // keyed by algebra token
    void add_ring_leaf(const std::string& tok, const Algebra& t, std::map<std::string, AlgebraMap> maps);

    Bimodule leaf(const std::string& tok, const std::string& left, const std::string& right);
    TensorSpace chain(const std::string& spec);
    std::vector<std::size_t> dims(const std::string& spec);

    // carrier-level matrix of the k-level word ops between the two chains
    Matrix map(const std::string& dom, const std::string& cod, const std::vector<LocalOp>& ops,
               const std::string& what = "map");
    // as map, into a plain space
    Matrix map_plain(const std::string& dom, const std::vector<LocalOp>& ops, const std::string& what = "map");
    Matrix raw(const std::string& dom, const std::vector<LocalOp>& ops);

private:
    Field field_;
    std::map<std::string, Algebra> algebras_;
    std::map<std::string, LeafFactory> factories_;
    std::map<std::string, Bimodule> fixed_;
    std::map<std::string, Bimodule> leaves_;
    std::map<std::string, TensorSpace> chains_;
    mutable std::recursive_mutex mu_;
};

std::vector<std::string> split_spec(const std::string& spec);

// permutation of k-tensor factors: output factor i is input factor perm[i]
Matrix permute_factors(Field f, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& perm);

} // namespace torsorkit
