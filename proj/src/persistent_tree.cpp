#include "linesep/persistent_tree.hpp"

#include "linesep/error.hpp"

namespace linesep {

PersistentOrderTree::PersistentOrderTree() : nodes_(1) {}

PersistentOrderTree::Version PersistentOrderTree::make(std::int64_t key, std::uint32_t value, Version l, Version r) {
    Node n;
    n.key = key;
    n.value = value;
    n.left = l;
    n.right = r;
    n.size = nodes_[l].size + nodes_[r].size + 1;
    nodes_.push_back(n);
    return static_cast<Version>(nodes_.size() - 1);
}

PersistentOrderTree::Version PersistentOrderTree::rotate_left(std::int64_t key, std::uint32_t value, Version l,
                                                              Version r) {
    Node rn = nodes_[r];
    if (weight(rn.left) < kGamma * weight(rn.right)) {
        return make(rn.key, rn.value, make(key, value, l, rn.left), rn.right);
    }
    Node rl = nodes_[rn.left];
    return make(rl.key, rl.value, make(key, value, l, rl.left), make(rn.key, rn.value, rl.right, rn.right));
}

PersistentOrderTree::Version PersistentOrderTree::rotate_right(std::int64_t key, std::uint32_t value, Version l,
                                                               Version r) {
    Node ln = nodes_[l];
    if (weight(ln.right) < kGamma * weight(ln.left)) {
        return make(ln.key, ln.value, ln.left, make(key, value, ln.right, r));
    }
    Node lr = nodes_[ln.right];
    return make(lr.key, lr.value, make(ln.key, ln.value, ln.left, lr.left), make(key, value, lr.right, r));
}

PersistentOrderTree::Version PersistentOrderTree::balance(std::int64_t key, std::uint32_t value, Version l,
                                                          Version r) {
    if (weight(l) + weight(r) <= 3) return make(key, value, l, r);
    if (weight(r) > kDelta * weight(l)) return rotate_left(key, value, l, r);
    if (weight(l) > kDelta * weight(r)) return rotate_right(key, value, l, r);
    return make(key, value, l, r);
}

PersistentOrderTree::Version PersistentOrderTree::insert(Version v, std::int64_t key, std::uint32_t value) {
    if (v == kEmpty) return make(key, value, kEmpty, kEmpty);
    Node n = nodes_[v];
    if (key < n.key) return balance(n.key, n.value, insert(n.left, key, value), n.right);
    if (n.key < key) return balance(n.key, n.value, n.left, insert(n.right, key, value));
    return make(key, value, n.left, n.right);
}

PersistentOrderTree::Version PersistentOrderTree::glue(Version l, Version r) {
    if (l == kEmpty) return r;
    if (r == kEmpty) return l;
    if (nodes_[l].size > nodes_[r].size) {
        // Pull up the maximum of the left side.
        Version cur = l;
        while (nodes_[cur].right != kEmpty) cur = nodes_[cur].right;
        Node m = nodes_[cur];
        return balance(m.key, m.value, erase(l, m.key), r);
    }
    Version cur = r;
    while (nodes_[cur].left != kEmpty) cur = nodes_[cur].left;
    Node m = nodes_[cur];
    return balance(m.key, m.value, l, erase(r, m.key));
}

PersistentOrderTree::Version PersistentOrderTree::erase(Version v, std::int64_t key) {
    if (v == kEmpty) return v;
    Node n = nodes_[v];
    if (key < n.key) {
        Version l = erase(n.left, key);
        return l == n.left ? v : balance(n.key, n.value, l, n.right);
    }
    if (n.key < key) {
        Version r = erase(n.right, key);
        return r == n.right ? v : balance(n.key, n.value, n.left, r);
    }
    return glue(n.left, n.right);
}

bool PersistentOrderTree::contains(Version v, std::int64_t key) const {
    while (v != kEmpty) {
        const Node& n = nodes_[v];
        if (key == n.key) return true;
        v = key < n.key ? n.left : n.right;
    }
    return false;
}

std::size_t PersistentOrderTree::count_less(Version v, std::int64_t key) const {
    std::size_t count = 0;
    while (v != kEmpty) {
        const Node& n = nodes_[v];
        if (n.key < key) {
            count += nodes_[n.left].size + 1;
            v = n.right;
        } else {
            v = n.left;
        }
    }
    return count;
}

std::size_t PersistentOrderTree::count_less_equal(Version v, std::int64_t key) const {
    std::size_t count = 0;
    while (v != kEmpty) {
        const Node& n = nodes_[v];
        if (n.key <= key) {
            count += nodes_[n.left].size + 1;
            v = n.right;
        } else {
            v = n.left;
        }
    }
    return count;
}

std::size_t PersistentOrderTree::count_open(Version v, std::int64_t lo, std::int64_t hi) const {
    if (hi <= lo) return 0;
    std::size_t below = count_less(v, hi);
    std::size_t upto = count_less_equal(v, lo);
    return below > upto ? below - upto : 0;
}

std::pair<std::int64_t, std::uint32_t> PersistentOrderTree::select(Version v, std::size_t idx) const {
    if (idx >= nodes_[v].size) throw precondition_error("PersistentOrderTree::select: index out of range");
    while (true) {
        const Node& n = nodes_[v];
        std::size_t left = nodes_[n.left].size;
        if (idx < left) {
            v = n.left;
        } else if (idx == left) {
            return {n.key, n.value};
        } else {
            idx -= left + 1;
            v = n.right;
        }
    }
}

bool PersistentOrderTree::valid(Version v) const { return valid(v, nullptr, nullptr); }

bool PersistentOrderTree::valid(Version v, const std::int64_t* lo, const std::int64_t* hi) const {
    if (v == kEmpty) return true;
    const Node& n = nodes_[v];
    if ((lo && n.key <= *lo) || (hi && n.key >= *hi)) return false;
    if (n.size != nodes_[n.left].size + nodes_[n.right].size + 1) return false;
    std::uint64_t wl = weight(n.left), wr = weight(n.right);
    if (wl + wr > 3 && (wl > kDelta * wr || wr > kDelta * wl)) return false;
    return valid(n.left, lo, &n.key) && valid(n.right, &n.key, hi);
}

}  // namespace linesep
