#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "senseforge/embeddings.hpp"
#include "senseforge/error.hpp"

using namespace senseforge;

namespace {

EmbeddingStore parse(const std::string& text) {
    std::istringstream in(text);
    return parse_embeddings(in, "vec.txt");
}

EmbeddingStore small_store() {
    EmbeddingStore s(2);
    s.add("the", {9, 9});
    s.add("a", {7, 7});
    s.add("big", {2, 0});
    s.add("band", {0, 2});
    s.add("rock", {5, -5});
    s.add("stone", {1, 3});
    s.add("lump", {1, 0});
    s.add("he", {4, 0});
    s.add("threw", {0, 4});
    s.set_stopwords({"the", "a", "of"});
    return s;
}

void check_vec(const std::optional<Vec>& got, const Vec& want) {
    REQUIRE(got.has_value());
    REQUIRE(got->size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK((*got)[i] == doctest::Approx(want[i]).epsilon(1e-15));
}

}  // namespace

TEST_CASE("embedding file with header") {
    const auto s = parse("2 3\na 1 0 0\nb 0 1 0\n");
    CHECK(s.dim() == 3);
    CHECK(s.size() == 2);
    REQUIRE(s.find("b"));
    CHECK(*s.find("b") == Vec{0, 1, 0});
    CHECK(s.find("c") == nullptr);
}

TEST_CASE("embedding file without header infers the dimension") {
    const auto s = parse("x 0.5 -1 2e-1 3\ny 1 1 1 1\n");
    CHECK(s.dim() == 4);
    CHECK(*s.find("x") == Vec{0.5, -1, 0.2, 3});
}

TEST_CASE("embedding errors") {
    try {
        parse("2 3\na 1 0 0\nshort 0 1\n");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("short") != std::string::npos);
    }
    try {
        parse("a 1 0\nb 1 zz\n");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("zz") != std::string::npos);
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse(""), InputError);
    CHECK_THROWS_AS(parse("lonely\n"), ParseError);
    EmbeddingStore s(2);
    CHECK_THROWS_AS(s.add("x", {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("stopword files allow comments") {
    std::istringstream in("# list\nthe\n  of  # trailing\n\na\n");
    const auto sw = parse_stopwords(in);
    CHECK(sw == std::unordered_set<std::string>{"the", "of", "a"});
}

TEST_CASE("average_vector") {
    const auto s = small_store();
    check_vec(average_vector(std::vector<std::string>{"a", "stone"}, s), {1, 3});
    check_vec(average_vector(std::vector<std::string>{"big", "band"}, s), {1, 1});
    CHECK_FALSE(average_vector(std::vector<std::string>{"the", "of"}, s));
    // unknown tokens shrink the divisor
    check_vec(average_vector(std::vector<std::string>{"big", "zzz"}, s), {2, 0});
    CHECK_FALSE(average_vector(std::vector<std::string>{}, s));
}

TEST_CASE("definition_vector") {
    const auto s = small_store();
    check_vec(definition_vector(Sense{"x", {"stone"}, {}, {}}, s), {1, 3});
    CHECK_FALSE(definition_vector(Sense{"x", {}, {}, {}}, s));
    EmbeddingStore t(2);
    t.add("lump", {1, 0});
    t.add("stone", {0, 1});
    check_vec(definition_vector(Sense{"x", {"lump", "stone"}, {}, {}}, t), {0.5, 0.5});
}

TEST_CASE("example_vector") {
    const auto s = small_store();
    const ContextSpec c8{8};
    Sense rock{"rock.n.1", {}, {{"he", "threw", "a", "rock"}}, {}};
    check_vec(example_vector(rock, "rock", c8, s), {2, 2});  // mean of he, threw
    CHECK_FALSE(example_vector(Sense{"x", {"def"}, {}, {}}, "rock", c8, s));
    Sense other{"x", {}, {{"big", "band", "the"}}, {}};
    check_vec(example_vector(other, "rock", c8, s), {1, 1});  // whole example
    // only the first example is used; window c=2 keeps one token each side
    Sense two{"x", {}, {{"lump", "big", "rock", "band", "stone"}, {"he"}}, {}};
    check_vec(example_vector(two, "rock", ContextSpec{2}, s), {1, 1});
}

TEST_CASE("context_vector") {
    const auto s = small_store();
    const ContextSpec c8{8};
    const std::vector<std::string> sent{"the", "big", "rock", "band"};
    check_vec(context_vector(sent, 2, c8, s), {1, 1});
    CHECK_FALSE(context_vector(std::vector<std::string>{"rock"}, 0, c8, s));
    check_vec(context_vector(std::vector<std::string>{"rock", "big", "band"}, 0, c8, s), {1, 1});
    CHECK_THROWS_AS(context_vector(sent, 4, c8, s), std::out_of_range);

    const auto w = context_window(20, 10, c8);
    CHECK(w.left_begin == 6);
    CHECK(w.right_end == 15);
    const auto edge = context_window(3, 0, c8);
    CHECK(edge.left_begin == 0);
    CHECK(edge.left_end == 0);
    CHECK(edge.right_end == 3);
}

TEST_CASE("ContextSpec validation") {
    CHECK_NOTHROW(ContextSpec{2}.validate());
    CHECK_NOTHROW(ContextSpec{8}.validate());
    CHECK_THROWS_AS(ContextSpec{0}.validate(), InputError);
    CHECK_THROWS_AS(ContextSpec{7}.validate(), InputError);
}

TEST_CASE("property: averaging and windowing") {
    std::mt19937 rng(11);
    std::normal_distribution<double> normal;
    const std::size_t dim = 4;
    EmbeddingStore store(dim);
    std::vector<std::string> vocab;
    for (int i = 0; i < 30; ++i) {
        vocab.push_back("t" + std::to_string(i));
        if (i % 7 == 6) continue;  // a few out-of-vocabulary tokens
        Vec v(dim);
        for (double& x : v) x = normal(rng);
        store.add(vocab.back(), v);
    }
    store.set_stopwords({"t0", "t1", "t2"});

    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
        std::vector<std::string> sent;
        for (std::size_t i = 0; i < len; ++i) sent.push_back(vocab[rng() % vocab.size()]);
        const std::size_t index = rng() % len;
        const ContextSpec spec{2 * std::uniform_int_distribution<std::size_t>(1, 6)(rng)};

        // oracle: explicit loop over every position
        Vec sum(dim, 0.0);
        std::size_t used = 0;
        for (std::size_t k = 0; k < len; ++k) {
            const auto dist = k < index ? index - k : k - index;
            if (k == index || dist > spec.half()) continue;
            if (store.is_stopword(sent[k]) || !store.find(sent[k])) continue;
            axpy(sum, 1.0, *store.find(sent[k]));
            ++used;
        }
        const auto got = context_vector(sent, index, spec, store);
        CHECK(got.has_value() == (used > 0));
        if (got) {
            CHECK(got->size() == dim);
            for (std::size_t d = 0; d < dim; ++d) CHECK((*got)[d] == doctest::Approx(sum[d] / used).epsilon(1e-12));
        }

        const auto w = context_window(len, index, spec);
        const auto considered = (w.left_end - w.left_begin) + (w.right_end - w.right_begin);
        CHECK(considered <= spec.window);
        CHECK(w.left_end - w.left_begin <= index);
        CHECK(w.right_end - w.right_begin <= len - index - 1);

        // the target's own vector is never read
        EmbeddingStore altered = store;
        Vec junk(dim, 1e6);
        altered.add(sent[index], junk);
        bool target_elsewhere = false;
        for (std::size_t k = w.left_begin; k < w.right_end; ++k)
            if (k != index && sent[k] == sent[index]) target_elsewhere = true;
        if (!target_elsewhere) {
            const auto again = context_vector(sent, index, spec, altered);
            CHECK(again.has_value() == got.has_value());
            if (got) CHECK(*again == *got);
        }

        // permutation invariance of average_vector
        auto shuffled = sent;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto a = average_vector(sent, store);
        const auto b = average_vector(shuffled, store);
        CHECK(a.has_value() == b.has_value());
        if (a)
            for (std::size_t d = 0; d < dim; ++d) CHECK((*a)[d] == doctest::Approx((*b)[d]).epsilon(1e-12));
    }
}
