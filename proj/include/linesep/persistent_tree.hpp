#pragma once

// Persistent weight-balanced order-statistics tree (path copying).
// Every update returns a new version; older versions stay valid and answer
// rank / select queries exactly as before.

#include <cstdint>
#include <utility>
#include <vector>

namespace linesep {

class PersistentOrderTree {
public:
    using Version = std::uint32_t;  // 0 is the empty tree
    static constexpr Version kEmpty = 0;

    PersistentOrderTree();

    // Inserting an existing key replaces its value.
    Version insert(Version v, std::int64_t key, std::uint32_t value);
    // Erasing a missing key returns v unchanged.
    Version erase(Version v, std::int64_t key);

    std::size_t size(Version v) const { return nodes_[v].size; }
    bool contains(Version v, std::int64_t key) const;
    std::size_t count_less(Version v, std::int64_t key) const;
    std::size_t count_less_equal(Version v, std::int64_t key) const;
    // Keys strictly between lo and hi.
    std::size_t count_open(Version v, std::int64_t lo, std::int64_t hi) const;
    // idx-th smallest entry (0-based); idx < size(v).
    std::pair<std::int64_t, std::uint32_t> select(Version v, std::size_t idx) const;

    std::size_t node_count() const { return nodes_.size() - 1; }
    // Structural check: sizes, ordering and the weight-balance condition.
    bool valid(Version v) const;

private:
    struct Node {
        std::int64_t key = 0;
        std::uint32_t value = 0;
        Version left = 0, right = 0;
        std::uint32_t size = 0;
    };
    static constexpr std::uint64_t kDelta = 3;
    static constexpr std::uint64_t kGamma = 2;

    Version make(std::int64_t key, std::uint32_t value, Version l, Version r);
    Version balance(std::int64_t key, std::uint32_t value, Version l, Version r);
    Version rotate_left(std::int64_t key, std::uint32_t value, Version l, Version r);
    Version rotate_right(std::int64_t key, std::uint32_t value, Version l, Version r);
    Version glue(Version l, Version r);
    std::uint64_t weight(Version v) const { return std::uint64_t{nodes_[v].size} + 1; }
    bool valid(Version v, const std::int64_t* lo, const std::int64_t* hi) const;

    std::vector<Node> nodes_;
};

}  // namespace linesep
