#include "linesep/persistent_tree.hpp"
#include "linesep/random.hpp"

#include <doctest.h>

#include <iterator>
#include <map>

using namespace linesep;

namespace {

using Model = std::map<std::int64_t, std::uint32_t>;

void check_against(const PersistentOrderTree& t, PersistentOrderTree::Version v, const Model& m, Rng& rng) {
    REQUIRE(t.size(v) == m.size());
    CHECK(t.valid(v));
    std::size_t idx = 0;
    for (auto [k, val] : m) {
        auto got = t.select(v, idx);
        CHECK(got.first == k);
        CHECK(got.second == val);
        ++idx;
    }
    for (int q = 0; q < 20; ++q) {
        std::int64_t lo = static_cast<std::int64_t>(uniform_below(rng, 220)) - 10;
        std::int64_t hi = lo + static_cast<std::int64_t>(uniform_below(rng, 60));
        auto less = static_cast<std::size_t>(std::distance(m.begin(), m.lower_bound(lo)));
        auto less_eq = static_cast<std::size_t>(std::distance(m.begin(), m.upper_bound(lo)));
        CHECK(t.count_less(v, lo) == less);
        CHECK(t.count_less_equal(v, lo) == less_eq);
        CHECK(t.contains(v, lo) == (m.count(lo) > 0));
        std::size_t open = 0;
        for (auto [k, val] : m) open += (k > lo && k < hi);
        CHECK(t.count_open(v, lo, hi) == open);
    }
}

}  // namespace

TEST_SUITE("persistent_tree") {

TEST_CASE("examples") {
    PersistentOrderTree t;
    auto v0 = PersistentOrderTree::kEmpty;
    CHECK(t.size(v0) == 0);
    auto v1 = t.insert(v0, 5, 50);
    auto v2 = t.insert(v1, 2, 20);
    auto v3 = t.insert(v2, 9, 90);
    CHECK(t.size(v3) == 3);
    CHECK(t.select(v3, 0) == std::pair<std::int64_t, std::uint32_t>{2, 20});
    CHECK(t.select(v3, 2) == std::pair<std::int64_t, std::uint32_t>{9, 90});
    CHECK(t.count_less(v3, 9) == 2);
    CHECK(t.count_open(v3, 2, 9) == 1);
    auto v4 = t.erase(v3, 5);
    CHECK(t.size(v4) == 2);
    CHECK_FALSE(t.contains(v4, 5));
    CHECK(t.contains(v3, 5));
    CHECK(t.erase(v4, 77) == v4);
    auto v5 = t.insert(v4, 2, 21);
    CHECK(t.size(v5) == 2);
    CHECK(t.select(v5, 0).second == 21);
    CHECK(t.select(v4, 0).second == 20);
}

TEST_CASE("every version matches an ordered map") {
    Rng rng(13);
    PersistentOrderTree t;
    std::vector<PersistentOrderTree::Version> versions{PersistentOrderTree::kEmpty};
    std::vector<Model> models{Model{}};
    for (int step = 0; step < 1500; ++step) {
        // Branch from a random earlier version now and then.
        std::size_t from = uniform_below(rng, 5) == 0 ? uniform_below(rng, versions.size()) : versions.size() - 1;
        Model m = models[from];
        std::int64_t key = static_cast<std::int64_t>(uniform_below(rng, 200));
        PersistentOrderTree::Version v;
        if (uniform_below(rng, 3) == 0) {
            v = t.erase(versions[from], key);
            m.erase(key);
        } else {
            auto val = static_cast<std::uint32_t>(uniform_below(rng, 1000));
            v = t.insert(versions[from], key, val);
            m[key] = val;
        }
        versions.push_back(v);
        models.push_back(std::move(m));
        if (step % 50 == 0)
            for (std::size_t w = 0; w < versions.size(); w += 1 + versions.size() / 10)
                check_against(t, versions[w], models[w], rng);
    }
    for (std::size_t w = 0; w < versions.size(); ++w) check_against(t, versions[w], models[w], rng);
}

TEST_CASE("ascending inserts stay balanced with logarithmic copying") {
    PersistentOrderTree t;
    PersistentOrderTree::Version v = PersistentOrderTree::kEmpty;
    const int n = 1 << 14;
    for (int k = 0; k < n; ++k) v = t.insert(v, k, static_cast<std::uint32_t>(k));
    CHECK(t.valid(v));
    CHECK(t.size(v) == static_cast<std::size_t>(n));
    // Path copying: O(log n) new nodes per update.
    CHECK(t.node_count() <= static_cast<std::size_t>(n) * 3 * 15);
    CHECK(t.select(v, 1234).first == 1234);
}

}  // TEST_SUITE
