#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "fis/errors.hpp"
#include "fis/kernel.hpp"

using namespace fis;

namespace {

Wff wff(std::vector<std::string> syms, std::string characteristic = "sbc") {
    Wff w;
    w.characteristic = std::move(characteristic);
    w.symbols = std::move(syms);
    return w;
}

// Brute-force oracle: enumerate every substring of `a`, keep those occurring
// contiguously in `b`, take the longest; ties resolve to the earliest start
// in `a`, then in `b` (which equals earliest in `a` for fixed content).
std::vector<std::string> lcs_oracle(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
    std::vector<std::string> best;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t len = a.size() - i; len > 0; --len) {
            if (len < best.size() || (len == best.size() && !best.empty())) break;
            if (len <= best.size()) break;
            std::vector<std::string> cand(a.begin() + i, a.begin() + i + len);
            for (std::size_t j = 0; j + len <= b.size(); ++j) {
                if (std::equal(cand.begin(), cand.end(), b.begin() + j)) {
                    best = cand;
                    break;
                }
            }
        }
    }
    return best;
}

// Self-learning oracle: all distinct maximal-length pairwise intersections.
std::vector<std::vector<std::string>> self_learn_oracle(
    const std::vector<std::vector<std::string>>& sample) {
    std::size_t max_len = 0;
    std::vector<std::vector<std::string>> winners;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const auto common = lcs_oracle(sample[i], sample[j]);
            if (common.empty()) continue;
            if (common.size() > max_len) {
                max_len = common.size();
                winners.clear();
            }
            if (common.size() == max_len &&
                std::find(winners.begin(), winners.end(), common) == winners.end())
                winners.push_back(common);
        }
    }
    return winners;
}

std::vector<std::string> random_sequence(std::mt19937& rng, int max_len,
                                         int alphabet) {
    std::uniform_int_distribution<int> len(1, max_len), sym(0, alphabet - 1);
    std::vector<std::string> out;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) out.push_back("s" + std::to_string(sym(rng)));
    return out;
}

} // namespace

TEST_CASE("numbering: first axiom is 1, bijective, dense") {
    AxiomBase base;
    const auto i1 = base.number_axiom(wff({"a", "b"}));
    CHECK(i1 == 1);
    CHECK(base.number_axiom(wff({"a", "b"})) == i1);
    const auto i2 = base.number_axiom(wff({"c"}));
    CHECK(i2 == 2);
    CHECK(base.identify(wff({"a", "b"})) == i1);
    CHECK_FALSE(base.identify(wff({"zzz"})).has_value());
    CHECK(base.check_z1_properties().ok());
}

TEST_CASE("ill-ordered expressions are rejected, not numbered") {
    AxiomBase base;
    CHECK_THROWS_AS(base.number_axiom(wff({"b", "a"}, "asc")), PreconditionError);
    CHECK(base.size() == 0);
    CHECK(base.rejected_count() == 1);
    CHECK(base.number_axiom(wff({"a", "b"}, "asc")) == 1);
    const auto report = base.check_z1_properties();
    CHECK(report.ok()); // rejected expression never entered T1
}

TEST_CASE("intersect: basic cases") {
    const auto r = AxiomBase::intersect(wff({"a", "b", "c", "d"}),
                                        wff({"x", "b", "c", "y"}));
    REQUIRE(r.has_value());
    CHECK(r->symbols == std::vector<std::string>{"b", "c"});

    const auto self = AxiomBase::intersect(wff({"p", "q"}), wff({"p", "q"}));
    REQUIRE(self.has_value());
    CHECK(self->symbols == std::vector<std::string>{"p", "q"});

    CHECK_FALSE(AxiomBase::intersect(wff({"a"}), wff({"b"})).has_value());
    CHECK_THROWS_AS(AxiomBase::intersect(wff({"a"}), wff({"a"}, "other")), ParamError);
}

TEST_CASE("intersect equals the brute-force oracle (property)") {
    std::mt19937 rng(23);
    for (int iter = 0; iter < 400; ++iter) {
        const auto a = random_sequence(rng, 12, 4);
        const auto b = random_sequence(rng, 12, 4);
        const auto got = AxiomBase::intersect(wff(a), wff(b));
        const auto expect = lcs_oracle(a, b);
        if (expect.empty()) {
            CHECK_FALSE(got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(got->symbols.size() == expect.size());
            CHECK(got->symbols == expect);
        }
    }
}

TEST_CASE("intersect is commutative in length and bounded (property)") {
    std::mt19937 rng(29);
    for (int iter = 0; iter < 200; ++iter) {
        const auto a = random_sequence(rng, 10, 3);
        const auto b = random_sequence(rng, 10, 3);
        const auto ab = AxiomBase::intersect(wff(a), wff(b));
        const auto ba = AxiomBase::intersect(wff(b), wff(a));
        CHECK((ab.has_value()) == (ba.has_value()));
        if (ab) {
            CHECK(ab->symbols.size() == ba->symbols.size());
            CHECK(ab->symbols.size() <= std::min(a.size(), b.size()));
        }
    }
}

TEST_CASE("self_learn: square pair beats square-triangle overlap") {
    AxiomBase base;
    const auto sq1 = base.number_axiom(wff({"fig", "r", "r", "r", "r", "n4", "l5"}));
    const auto sq2 = base.number_axiom(wff({"fig", "r", "r", "r", "r", "n4", "l9"}));
    const auto tri = base.number_axiom(wff({"fig", "r", "r", "r", "n3", "l5"}));
    const auto concepts = base.self_learn({sq1, sq2, tri});
    REQUIRE(concepts.size() == 1);
    CHECK(concepts[0].sequence ==
          std::vector<std::string>{"fig", "r", "r", "r", "r", "n4"});
}

TEST_CASE("self_learn: identical pair yields the full sequence") {
    AxiomBase base;
    const auto a = base.number_axiom(wff({"x", "y", "z"}));
    const auto concepts = base.self_learn({a, a});
    REQUIRE(concepts.size() == 1);
    CHECK(concepts[0].sequence == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("self_learn: disjoint sample forms no classes") {
    AxiomBase base;
    const auto a = base.number_axiom(wff({"a"}));
    const auto b = base.number_axiom(wff({"b"}));
    CHECK(base.self_learn({a, b}).empty());
    CHECK(base.self_learn({a}).empty());
}

TEST_CASE("self_learn equals the brute-force grouping oracle on random samples") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> count(2, 6);
    for (int iter = 0; iter < 60; ++iter) {
        AxiomBase base;
        std::vector<std::vector<std::string>> sample;
        std::vector<AxiomIndex> indexes;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            sample.push_back(random_sequence(rng, 20, 5));
            indexes.push_back(base.number_axiom(wff(sample.back())));
        }
        const auto got = base.self_learn(indexes);
        const auto expect = self_learn_oracle(sample);
        REQUIRE(got.size() == expect.size());
        std::set<std::vector<std::string>> got_set, expect_set;
        for (const auto& c : got) got_set.insert(c.sequence);
        for (const auto& seq : expect) expect_set.insert(seq);
        CHECK(got_set == expect_set);
    }
}

TEST_CASE("class axioms join the base and monotone growth holds") {
    AxiomBase base;
    const auto a = base.number_axiom(wff({"a", "b", "c"}));
    const auto b = base.number_axiom(wff({"z", "b", "c"}));
    const std::size_t before = base.size();
    const auto concepts = base.self_learn({a, b});
    REQUIRE(concepts.size() == 1);
    CHECK(base.size() == before + 1);
    CHECK(base.identify(wff({"b", "c"})).has_value());
    CHECK(base.check_z1_properties().ok());
}

TEST_CASE("chains: neighbors are predecessors then successors") {
    AxiomBase base;
    const auto a = base.number_axiom(wff({"a"}));
    const auto b = base.number_axiom(wff({"b"}));
    const auto c = base.number_axiom(wff({"c"}));
    base.add_chain(a, b);
    base.add_chain(b, c);
    CHECK(base.chain_neighbors(b) == std::vector<AxiomIndex>{a, c});
    CHECK(base.chain_neighbors(a) == std::vector<AxiomIndex>{b});
    CHECK_THROWS_AS(base.add_chain(a, 99), PreconditionError);
}

TEST_CASE("check_z1_properties flags a corrupted reverse association") {
    AxiomBase base;
    base.load_ax_record("1 sbc a b", 1);
    base.load_ax_record("2 sbc a b", 2); // duplicate content, second index dangles
    const auto report = base.check_z1_properties();
    CHECK_FALSE(report.ok());
    CHECK_FALSE(report.bijective);
    bool named = false;
    for (const auto& d : report.diagnostics)
        if (d.find("2") != std::string::npos) named = true;
    CHECK(named);
}

TEST_CASE("check_z1_properties flags index gaps") {
    AxiomBase base;
    base.load_ax_record("1 sbc a", 1);
    base.load_ax_record("3 sbc b", 2);
    const auto report = base.check_z1_properties();
    CHECK_FALSE(report.dense);
}

TEST_CASE("serialization round-trips axioms and chains") {
    AxiomBase base;
    const auto a = base.number_axiom(wff({"a", "b"}));
    const auto b = base.number_axiom(wff({"c"}));
    base.add_chain(a, b);
    std::ostringstream first;
    base.serialize(first);

    AxiomBase copy;
    std::istringstream in(first.str());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto sp = line.find(' ');
        const auto tag = line.substr(0, sp);
        if (tag == "ax")
            copy.load_ax_record(line.substr(sp + 1), n);
        else if (tag == "chain")
            copy.load_chain_record(line.substr(sp + 1), n);
    }
    std::ostringstream second;
    copy.serialize(second);
    CHECK(first.str() == second.str());
    CHECK(copy.check_z1_properties().ok());
}
