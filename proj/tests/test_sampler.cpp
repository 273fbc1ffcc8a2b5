#include <doctest.h>

#include <algorithm>
#include <map>

#include "fixtures.hpp"
#include "hsasim/sampler.hpp"
#include "hsasim/stats.hpp"

using namespace hsasim;
using namespace hsasim::testing;

namespace {

// Minimal cohort with one known member per simulation stratum so that
// DistributionSet::build succeeds everywhere.
std::vector<FixturePerson> one_per_stratum() {
    std::vector<FixturePerson> persons;
    int i = 0;
    for (const auto& s : simulation_strata()) {
        FixturePerson p;
        p.id = "s" + std::to_string(i++);
        p.sex = s.sex;
        p.birth = birth_for_range(s.age_range);
        p.levels = {ExpenseLevel::F1, ExpenseLevel::F2, ExpenseLevel::F3,
                    ExpenseLevel::F4, ExpenseLevel::F2};
        persons.push_back(std::move(p));
    }
    return persons;
}

double chi_square(const std::map<std::int64_t, std::int64_t>& observed,
                  double expected_each, std::size_t cells) {
    double x2 = 0.0;
    std::size_t seen = 0;
    for (const auto& [value, count] : observed) {
        const double d = static_cast<double>(count) - expected_each;
        x2 += d * d / expected_each;
        ++seen;
    }
    // Cells never drawn still contribute their expectation.
    x2 += static_cast<double>(cells - seen) * expected_each;
    return x2;
}

}  // namespace

TEST_CASE("build_empirical pools one value per person-year") {
    std::vector<FixturePerson> persons;
    for (int i = 0; i < 2; ++i) {
        FixturePerson p;
        p.id = "p" + std::to_string(i);
        p.sex = Sex::female;
        p.birth = birth_for_range(AgeRange::A31_35);
        p.expenses = {Money::from_reais(50),   Money::from_reais(400),
                      Money::from_reais(2000), Money::from_reais(9000),
                      Money::from_reais(100 + i)};
        persons.push_back(std::move(p));
    }
    const Cohort cohort = build_cohort(persons);
    const auto dist =
        build_empirical(cohort, Stratum{Sex::female, AgeRange::A31_35});
    CHECK(dist.values.size() == 10);
    CHECK(std::is_sorted(dist.values.begin(), dist.values.end()));

    // Slice boundaries sit exactly at the 300/1000/5000 break points.
    CHECK(dist.slice_size(ExpenseLevel::F1) == 4);  // 50, 50, 100, 101
    CHECK(dist.slice_size(ExpenseLevel::F2) == 2);
    CHECK(dist.slice_size(ExpenseLevel::F3) == 2);
    CHECK(dist.slice_size(ExpenseLevel::F4) == 2);
    for (const auto l : kAllLevels) {
        const auto [b, e] = dist.slices[static_cast<std::size_t>(index(l))];
        for (std::size_t i = b; i < e; ++i)
            CHECK(classify_level(Money::from_cents(dist.values[i])) == l);
    }

    CHECK_THROWS_AS(build_empirical(cohort, Stratum{Sex::male, AgeRange::A31_35}),
                    std::runtime_error);
}

TEST_CASE("sorted output equals an oracle sort") {
    std::vector<FixturePerson> persons;
    FixturePerson p;
    p.id = "p0";
    p.sex = Sex::male;
    p.birth = birth_for_range(AgeRange::A41_45);
    p.expenses = {Money::from_cents(700), Money::from_cents(5),
                  Money::from_cents(700), Money::from_cents(0),
                  Money::from_cents(99999)};
    persons.push_back(p);
    const Cohort cohort = build_cohort(persons);
    const auto dist = build_empirical(cohort, Stratum{Sex::male, AgeRange::A41_45});
    std::vector<std::int64_t> expect = {700, 5, 700, 0, 99999};
    std::sort(expect.begin(), expect.end());
    CHECK(dist.values == expect);
}

TEST_CASE("sample_within_level draws uniformly from the slice") {
    std::vector<FixturePerson> persons = one_per_stratum();
    // Give F 25-30 an F1 slice of exactly {0, 100, 250} (R$).
    persons[0].levels.clear();
    persons[0].expenses = {Money::from_reais(0), Money::from_reais(100),
                           Money::from_reais(250), Money::from_reais(400),
                           Money::from_reais(2000)};
    const Cohort cohort = build_cohort(persons);
    const DistributionSet dists = DistributionSet::build(cohort);
    const Stratum stratum{Sex::female, AgeRange::A25_30};

    Rng rng(12345);
    std::map<std::int64_t, std::int64_t> seen;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Money m = dists.sample_within_level(stratum, ExpenseLevel::F1, rng);
        CHECK(classify_level(m) == ExpenseLevel::F1);
        ++seen[m.cents()];
    }
    CHECK(seen.size() == 3);
    CHECK(seen.count(0) == 1);
    CHECK(seen.count(10000) == 1);
    CHECK(seen.count(25000) == 1);
    // Uniformity: chi-square over 3 cells at alpha = 0.001 (df = 2).
    const double x2 = chi_square(seen, n / 3.0, 3);
    CHECK(x2 < chi_square_critical(2, 0.001));
}

TEST_CASE("singleton slice always returns its value") {
    const Cohort cohort = build_cohort(one_per_stratum());
    const DistributionSet dists = DistributionSet::build(cohort);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const Money m = dists.sample_within_level(
            Stratum{Sex::male, AgeRange::A56_60}, ExpenseLevel::F4, rng);
        CHECK(m == expense_for(ExpenseLevel::F4));
    }
}

TEST_CASE("empty slice falls back to the adjacent age range") {
    auto persons = one_per_stratum();
    // F 31-35 loses its F4 value; F 36-40 (older neighbour) keeps one.
    persons[1].levels = {ExpenseLevel::F1, ExpenseLevel::F1, ExpenseLevel::F1,
                         ExpenseLevel::F1, ExpenseLevel::F1};
    const Cohort cohort = build_cohort(persons);
    const DistributionSet dists = DistributionSet::build(cohort);
    CHECK(dists.at(Stratum{Sex::female, AgeRange::A31_35})
              .slice_empty(ExpenseLevel::F4));

    Rng rng(7);
    const Money m = dists.sample_within_level(
        Stratum{Sex::female, AgeRange::A31_35}, ExpenseLevel::F4, rng);
    // The draw still honours the requested level.
    CHECK(classify_level(m) == ExpenseLevel::F4);
    CHECK(m == expense_for(ExpenseLevel::F4));
}

TEST_CASE("fallback exhaustion is an error") {
    // Nobody anywhere has an F4 expense.
    auto persons = one_per_stratum();
    for (auto& p : persons)
        p.levels = {ExpenseLevel::F1, ExpenseLevel::F2, ExpenseLevel::F3,
                    ExpenseLevel::F2, ExpenseLevel::F1};
    const Cohort cohort = build_cohort(persons);
    const DistributionSet dists = DistributionSet::build(cohort);
    Rng rng(7);
    CHECK_THROWS_AS(dists.sample_within_level(Stratum{Sex::male, AgeRange::A31_35},
                                              ExpenseLevel::F4, rng),
                    std::runtime_error);
}

TEST_CASE("initial lives copy the source person's last two years") {
    std::vector<FixturePerson> persons = one_per_stratum();
    // The F 25-30 member: 2008 level F2, 2009 expense R$ 600 (F2).
    persons[0].levels.clear();
    persons[0].expenses = {Money::from_reais(1), Money::from_reais(2),
                           Money::from_reais(3), Money::from_reais(500),
                           Money::from_reais(600)};
    // Only members aged 25..30 on Dec 31 2009 qualify: the two 25-30
    // stratum members (one per sex block).
    const Cohort cohort = build_cohort(persons);
    const InitialLifePool pool(cohort);
    CHECK(pool.size() == 2);

    Rng rng(3);
    bool saw_female = false;
    for (int i = 0; i < 200; ++i) {
        const InitialLife life = pool.sample(rng);
        CHECK(classify_level(life.first_expense) == life.level_first);
        if (life.sex == Sex::female) {
            saw_female = true;
            CHECK(life.level_prev == ExpenseLevel::F2);   // R$ 500
            CHECK(life.level_first == ExpenseLevel::F2);  // R$ 600
            CHECK(life.first_expense == Money::from_reais(600));
        }
    }
    CHECK(saw_female);
}

TEST_CASE("pool draws are uniform with replacement") {
    // Five distinguishable members of the 25-30 pool.
    std::vector<FixturePerson> persons;
    for (int i = 0; i < 5; ++i) {
        FixturePerson p;
        p.id = "p" + std::to_string(i);
        p.sex = Sex::female;
        p.birth = birth_for_range(AgeRange::A25_30);
        p.expenses = {Money::from_reais(1), Money::from_reais(1),
                      Money::from_reais(1), Money::from_reais(1),
                      Money::from_reais(1000 + i)};
        persons.push_back(std::move(p));
    }
    const Cohort cohort = build_cohort(persons);
    const InitialLifePool pool(cohort);
    CHECK(pool.size() == 5);

    Rng rng(99);
    std::map<std::int64_t, std::int64_t> seen;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++seen[pool.sample(rng).first_expense.cents()];
    CHECK(seen.size() == 5);
    const double x2 = chi_square(seen, n / 5.0, 5);
    CHECK(x2 < chi_square_critical(4, 0.001));
}

TEST_CASE("empty pool is an error") {
    std::vector<FixturePerson> persons{
        FixturePerson{"p1", Sex::female, birth_for_range(AgeRange::A41_45),
                      {ExpenseLevel::F1, ExpenseLevel::F1, ExpenseLevel::F1,
                       ExpenseLevel::F1, ExpenseLevel::F1}}};
    const Cohort cohort = build_cohort(persons);
    CHECK_THROWS_AS(InitialLifePool{cohort}, std::runtime_error);
}
