#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "senseforge/clustering.hpp"
#include "senseforge/error.hpp"

using namespace senseforge;

namespace {

std::vector<Vec> repeat(const Vec& v, std::size_t n) { return std::vector<Vec>(n, v); }

std::vector<Vec> concat(std::vector<Vec> a, const std::vector<Vec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<std::string> labels_for(std::size_t k) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < k; ++j) out.push_back("w.n." + std::to_string(j));
    return out;
}

// Straightforward reference: Lloyd with first-lowest-index ties, then the
// absorption rule, written independently of the library.
struct Reference {
    std::vector<Vec> centroids;
    std::vector<std::size_t> counts;
    std::vector<std::size_t> kept;  // original cluster indices, ascending
    std::vector<std::size_t> assignment;  // original index per context
};

double sqdist(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

double cosd(const Vec& a, const Vec& b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0 || bb == 0) return 1.0;
    return 1.0 - std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

Reference reference_kmeans(const std::vector<Vec>& x, std::vector<Vec> c, std::size_t min_size, std::size_t max_iters) {
    const std::size_t n = x.size(), k = c.size();
    auto assign = [&] {
        std::vector<std::size_t> a(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < k; ++j)
                if (sqdist(x[i], c[j]) < sqdist(x[i], c[best])) best = j;
            a[i] = best;
        }
        return a;
    };
    auto update = [&](const std::vector<std::size_t>& a) {
        for (std::size_t j = 0; j < k; ++j) {
            Vec m(c[j].size(), 0.0);
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (a[i] == j) {
                    for (std::size_t d = 0; d < m.size(); ++d) m[d] += x[i][d];
                    ++cnt;
                }
            if (cnt == 0) continue;
            for (double& v : m) v /= static_cast<double>(cnt);
            c[j] = m;
        }
    };
    auto a = assign();
    bool converged = false;
    for (std::size_t it = 0; it < max_iters && !converged; ++it) {
        update(a);
        auto next = assign();
        converged = next == a;
        a = next;
    }
    if (!converged) update(a);

    std::vector<std::size_t> counts(k, 0);
    for (auto j : a) ++counts[j];
    std::vector<std::size_t> large;
    for (std::size_t j = 0; j < k; ++j)
        if (counts[j] > 0 && counts[j] >= min_size) large.push_back(j);
    Reference r;
    if (large.empty()) {
        std::size_t big = 0;
        for (std::size_t j = 1; j < k; ++j)
            if (counts[j] > counts[big]) big = j;
        r.kept = {big};
        r.assignment.assign(n, big);
    } else {
        r.kept = large;
        r.assignment = a;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(large.begin(), large.end(), a[i]) != large.end()) continue;
            std::size_t best = large[0];
            for (auto j : large)
                if (cosd(x[i], c[j]) < cosd(x[i], c[best])) best = j;
            r.assignment[i] = best;
        }
    }
    for (auto j : r.kept) {
        r.centroids.push_back(c[j]);
        r.counts.push_back(static_cast<std::size_t>(std::count(r.assignment.begin(), r.assignment.end(), j)));
    }
    return r;
}

}  // namespace

TEST_CASE("k-means: 12 + 12 orthogonal points") {
    const auto x = concat(repeat({1, 0}, 12), repeat({0, 1}, 12));
    const std::vector<Vec> init{{0.9, 0.1}, {0.1, 0.9}};
    const auto r = kmeans_adaptive(x, init, labels_for(2), {10, 100});
    REQUIRE(r.model.clusters.size() == 2);
    CHECK(r.model.clusters[0].count == 12);
    CHECK(r.model.clusters[1].count == 12);
    CHECK(r.model.clusters[0].centroid == Vec{1, 0});
    CHECK(r.model.clusters[1].centroid == Vec{0, 1});
    CHECK(r.model.clusters[0].label == "w.n.0");
    CHECK(r.converged);
    CHECK(r.model.dim == 2);
}

TEST_CASE("k-means: identical contexts collapse to one cluster") {
    const auto x = repeat({1, 1}, 20);
    const std::vector<Vec> init{{1, 0}, {0, 1}, {1, 1}};
    const auto r = kmeans_adaptive(x, init, labels_for(3));
    REQUIRE(r.model.clusters.size() == 1);
    CHECK(r.model.clusters[0].count == 20);
    CHECK(r.model.clusters[0].label == "w.n.2");
}

TEST_CASE("k-means: 25 + 5 points, the small cluster is absorbed") {
    const auto x = concat(repeat({1, 0}, 25), repeat({0, 1}, 5));
    const std::vector<Vec> init{{0.9, 0.1}, {0.1, 0.9}};
    const auto r = kmeans_adaptive(x, init, labels_for(2), {10, 100});
    REQUIRE(r.model.clusters.size() == 1);
    CHECK(r.model.clusters[0].count == 30);
    CHECK(r.model.clusters[0].label == "w.n.0");
    // centroid is not recomputed after absorption
    CHECK(r.model.clusters[0].centroid == Vec{1, 0});
    CHECK(std::all_of(r.assignments.begin(), r.assignments.end(), [](auto a) { return a == 0; }));
}

TEST_CASE("k-means: input validation") {
    const std::vector<Vec> init{{1, 0}};
    CHECK_THROWS_AS(kmeans_adaptive(std::vector<Vec>{}, init, labels_for(1)), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_adaptive(std::vector<Vec>{{1, 0, 0}}, init, labels_for(1)), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_adaptive(std::vector<Vec>{{1, 0}}, init, labels_for(2)), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_adaptive(std::vector<Vec>{{1, 0}}, std::vector<Vec>{}, labels_for(0)), std::invalid_argument);
}

TEST_CASE("reduce_small_clusters") {
    ClusterModel m;
    m.dim = 2;
    m.clusters = {{"a", {1, 0}, 40}, {"b", {0, 1}, 30}, {"c", {1, 1}, 3}};
    std::vector<Vec> x = concat(repeat({1, 0}, 40), repeat({0, 1}, 30));
    std::vector<std::size_t> assign(40, 0);
    assign.resize(70, 1);
    // cos to (1,0) vs (0,1): (0.9,0.5) -> a, (0.2,1) -> b, (1,0.1) -> a
    x.push_back({0.9, 0.5});
    x.push_back({0.2, 1.0});
    x.push_back({1.0, 0.1});
    assign.insert(assign.end(), {2, 2, 2});

    SUBCASE("one small cluster among {40, 30, 3}") {
        auto a = assign;
        const auto out = reduce_small_clusters(m, 10, x, a);
        REQUIRE(out.clusters.size() == 2);
        CHECK(out.clusters[0].count == 42);
        CHECK(out.clusters[1].count == 31);
        CHECK(a[70] == 0);
        CHECK(a[71] == 1);
        CHECK(a[72] == 0);
        CHECK(out.clusters[0].centroid == Vec{1, 0});
    }
    SUBCASE("nothing below the threshold") {
        auto a = assign;
        const auto out = reduce_small_clusters(m, 3, x, a);
        CHECK(out.clusters.size() == 3);
        CHECK(a == assign);
        CHECK(out.clusters == m.clusters);
    }
    SUBCASE("everything below the threshold") {
        auto a = assign;
        const auto out = reduce_small_clusters(m, 100, x, a);
        REQUIRE(out.clusters.size() == 1);
        CHECK(out.clusters[0].label == "a");
        CHECK(out.clusters[0].count == 73);
    }
}

TEST_CASE("kmeans_assign") {
    ClusterModel m;
    m.dim = 2;
    m.clusters = {{"x", {1, 0}, 1}, {"y", {0, 1}, 1}};
    CHECK(kmeans_assign(m, Vec{0, 1}).label == "y");
    CHECK(kmeans_assign(m, Vec{1, 1}).label == "x");
    CHECK(kmeans_assign(m, Vec{0.9, 0.1}).label == "x");
    const auto z = kmeans_assign(m, Vec{0, 0});
    CHECK(z.fallback);
    CHECK(z.index == 0);
    CHECK_FALSE(kmeans_assign(m, Vec{0, 1}).fallback);
    CHECK_THROWS_AS(kmeans_assign(m, Vec{1, 0, 0}), std::invalid_argument);
}

TEST_CASE("CRP: hand-traced three tokens") {
    const std::vector<Vec> defs{{1, 0}, {0, 1}};
    const std::vector<Vec> x{{1, 0}, {1, 0}, {0, 1}};
    // token 1: (gamma*1, gamma*0) = (1, 0) -> sense 0
    // token 2: (1*(0.5*1 + 0.5*1), gamma*0) = (1, 0) -> sense 0
    // token 3: (2*(0.5*0 + 0.5*0), gamma*1) = (0, 1) -> sense 1
    std::vector<Vec> means{{0, 0}, {0, 0}};
    std::vector<std::size_t> counts{0, 0};
    CHECK(crp_scores(x[0], defs, means, counts, {}) == std::vector<double>{1, 0});
    means[0] = {1, 0};
    counts[0] = 1;
    CHECK(crp_scores(x[1], defs, means, counts, {}) == std::vector<double>{1, 0});
    counts[0] = 2;
    CHECK(crp_scores(x[2], defs, means, counts, {}) == std::vector<double>{0, 1});

    const auto r = crp_cluster(x, defs, labels_for(2), {});
    CHECK(r.counts == std::vector<std::size_t>{2, 1});
    CHECK(r.sense_of == std::vector<std::size_t>{0, 0, 1});
    REQUIRE(r.model.clusters.size() == 2);
    CHECK(r.model.clusters[0].centroid == Vec{1, 0});
    CHECK(r.model.clusters[1].centroid == Vec{0, 1});
}

TEST_CASE("CRP: first token goes to the most definition-similar sense") {
    const std::vector<Vec> defs{{1, 0}, {0.6, 0.8}, {0, 1}};
    const auto r = crp_cluster(std::vector<Vec>{{0.5, 1}}, defs, labels_for(3), {});
    CHECK(r.sense_of == std::vector<std::size_t>{1});
    REQUIRE(r.model.clusters.size() == 1);  // empty senses are not reported
    CHECK(r.model.clusters[0].label == "w.n.1");
}

TEST_CASE("CRP: a single sense takes everything") {
    std::mt19937 rng(3);
    std::normal_distribution<double> normal;
    std::vector<Vec> x(25, Vec(3));
    for (auto& v : x)
        for (auto& c : v) c = normal(rng);
    const auto r = crp_cluster(x, std::vector<Vec>{{1, 2, 3}}, labels_for(1), {0.1, 2.0, 5.0});
    REQUIRE(r.model.clusters.size() == 1);
    CHECK(r.model.clusters[0].count == 25);
}

TEST_CASE("CRP: parameter validation") {
    CHECK_THROWS_AS((CrpParams{0, 0, 0}.validate()), InputError);
    CHECK_THROWS_AS((CrpParams{-1, 0.5, 1}.validate()), InputError);
    CHECK_NOTHROW((CrpParams{0, 0, 1}.validate()));
    CHECK_THROWS_AS(crp_cluster(std::vector<Vec>{{1, 0}}, std::vector<Vec>{{1, 0, 0}}, labels_for(1), {}),
                    std::invalid_argument);
}

TEST_CASE("property: k-means against the reference implementation") {
    std::mt19937 rng(5);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t dim = 1 + rng() % 4;
        const std::size_t n = 1 + rng() % 40;
        const std::size_t k = 1 + rng() % 5;
        const std::size_t min_size = rng() % 12;
        std::vector<Vec> x(n, Vec(dim)), init(k, Vec(dim));
        for (auto& v : x)
            for (auto& c : v) c = std::round(normal(rng) * 2) / 2;  // ties happen on a coarse grid
        for (auto& v : init)
            for (auto& c : v) c = normal(rng);
        const auto r = kmeans_adaptive(x, init, labels_for(k), {min_size, 50});
        const auto ref = reference_kmeans(x, init, min_size, 50);

        REQUIRE(r.model.clusters.size() == ref.kept.size());
        for (std::size_t j = 0; j < ref.kept.size(); ++j) {
            CHECK(r.model.clusters[j].label == "w.n." + std::to_string(ref.kept[j]));
            CHECK(r.model.clusters[j].count == ref.counts[j]);
            for (std::size_t d = 0; d < dim; ++d)
                CHECK(r.model.clusters[j].centroid[d] == doctest::Approx(ref.centroids[j][d]).epsilon(1e-12));
        }
        for (std::size_t i = 0; i < n; ++i) CHECK(r.model.clusters[r.assignments[i]].label == "w.n." + std::to_string(ref.assignment[i]));

        // invariants
        CHECK(r.model.total_count() == n);
        const auto min_count = std::min_element(r.model.clusters.begin(), r.model.clusters.end(),
                                                [](auto& a, auto& b) { return a.count < b.count; })->count;
        CHECK((r.model.clusters.size() == 1 || min_count >= min_size));
        for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
            CHECK(r.objective_trace[t] <= r.objective_trace[t - 1] * (1 + 1e-12) + 1e-12);
    }
}

TEST_CASE("property: kmeans_assign is deterministic and returns centroid owners") {
    std::mt19937 rng(9);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
        ClusterModel m;
        m.dim = 3;
        const std::size_t k = 1 + rng() % 5;
        for (std::size_t j = 0; j < k; ++j) {
            Vec c(3);
            for (auto& v : c) v = normal(rng);
            m.clusters.push_back({"c" + std::to_string(j), c, 1});
        }
        for (std::size_t j = 0; j < k; ++j) {
            const auto a = kmeans_assign(m, m.clusters[j].centroid);
            // a different centroid can only win if it points in the same direction
            CHECK(cosine_distance(m.clusters[a.index].centroid, m.clusters[j].centroid) <= 1e-12);
            CHECK(a.index <= j);
        }
        Vec u(3);
        for (auto& v : u) v = normal(rng);
        const auto a = kmeans_assign(m, u);
        CHECK(kmeans_assign(m, u).index == a.index);
        for (std::size_t j = 0; j < k; ++j)
            CHECK(cosine_distance(u, m.clusters[a.index].centroid) <= cosine_distance(u, m.clusters[j].centroid));
    }
}

TEST_CASE("property: CRP invariants and scaling invariance") {
    std::mt19937 rng(13);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.01, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 2 + rng() % 4, n = 1 + rng() % 30, k = 1 + rng() % 5;
        std::vector<Vec> x(n, Vec(dim)), defs(k, Vec(dim));
        for (auto& v : x)
            for (auto& c : v) c = normal(rng);
        for (auto& v : defs)
            for (auto& c : v) c = normal(rng);
        const CrpParams p{unif(rng), unif(rng), unif(rng)};
        const double scale = unif(rng) * 10;
        const auto a = crp_cluster(x, defs, labels_for(k), p);
        const auto b = crp_cluster(x, defs, labels_for(k), {p.lambda1 * scale, p.lambda2 * scale, p.gamma * scale});
        CHECK(a.sense_of == b.sense_of);
        CHECK(a.model == b.model);

        CHECK(std::accumulate(a.counts.begin(), a.counts.end(), std::size_t{0}) == n);
        CHECK(a.model.clusters.size() <= k);
        CHECK(a.model.total_count() == n);
        // running means equal the plain means of the members
        for (std::size_t j = 0; j < a.model.clusters.size(); ++j) {
            Vec mean(dim, 0.0);
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (a.assignments[i] == j) {
                    axpy(mean, 1.0, x[i]);
                    ++cnt;
                }
            CHECK(cnt == a.model.clusters[j].count);
            for (std::size_t d = 0; d < dim; ++d)
                CHECK(a.model.clusters[j].centroid[d] == doctest::Approx(mean[d] / cnt).epsilon(1e-10));
        }
    }
}

TEST_CASE("init mode names") {
    CHECK(parse_init_mode("definitions") == InitMode::definitions);
    CHECK(parse_init_mode("examples") == InitMode::examples);
    CHECK(init_mode_name(InitMode::examples) == "examples");
    CHECK_THROWS_AS(parse_init_mode("random"), InputError);
}
