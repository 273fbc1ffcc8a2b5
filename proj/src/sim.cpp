#include "hsasim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hsasim/stats.hpp"

namespace hsasim {

namespace fs = std::filesystem;
using nlohmann::json;

void SimulationParams::validate() const {
    if (n_lives < 1) throw std::invalid_argument("n_lives must be >= 1");
    if (n_replications < 1)
        throw std::invalid_argument("n_replications must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    hsa.validate();
    if (hsa.years > 41)
        throw std::invalid_argument("horizon beyond age 65 is not supported");
    for (int age : snapshot_ages)
        if (age < 25 || age > 25 + hsa.years - 1)
            throw std::invalid_argument("snapshot age " + std::to_string(age) +
                                        " outside the simulated range");
    if (!breaks.ordered())
        throw std::invalid_argument("level break points must be increasing");
}

ExpenseLevel predict_next_level(const TransitionModel& model,
                                const Stratum& stratum,
                                std::pair<ExpenseLevel, ExpenseLevel> prev2,
                                Rng& rng) {
    const Order2Matrix& m = model.at(stratum);
    const int row = Order2Matrix::row_index(prev2.first, prev2.second);
    return level_from_index(
        static_cast<int>(rng.categorical(std::span<const double>(m.probs[row]))));
}

LifeTrajectory simulate_life(const TransitionModel& model,
                             const DistributionSet& dists,
                             const InitialLife& initial,
                             const SimulationParams& params, Rng& rng) {
    const int years = params.hsa.years;
    std::vector<Money> expenses(static_cast<std::size_t>(years));
    expenses[0] = initial.first_expense;

    ExpenseLevel two_back = initial.level_prev;
    ExpenseLevel one_back = initial.level_first;
    for (int y = 1; y < years; ++y) {
        const int age = 25 + y;
        const auto range = range_for_age(age);
        if (!range) throw std::logic_error("simulated age outside 21..65");
        const Stratum stratum{initial.sex, *range};
        const ExpenseLevel next =
            predict_next_level(model, stratum, {two_back, one_back}, rng);
        expenses[static_cast<std::size_t>(y)] =
            dists.sample_within_level(stratum, next, rng);
        two_back = one_back;
        one_back = next;
    }

    return simulate_account(
        initial,
        [&expenses](int y) { return expenses[static_cast<std::size_t>(y)]; },
        params.hsa);
}

namespace {

std::vector<std::pair<double, double>> grid_percentiles(
    std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(kSimTablePercentiles.size());
    for (double q : kSimTablePercentiles)
        out.emplace_back(q, percentile_sorted(values, q));
    return out;
}

PositiveStats positive_stats(const std::vector<std::int64_t>& cents) {
    PositiveStats s;
    s.n_total = static_cast<std::int64_t>(cents.size());
    std::vector<double> pos;
    pos.reserve(cents.size());
    for (auto c : cents) {
        if (c == 0)
            ++s.n_zero;
        else
            pos.push_back(static_cast<double>(c) / 100.0);
    }
    s.has_positive = !pos.empty();
    if (s.has_positive) {
        s.percentiles = grid_percentiles(pos);
        s.mean = mean(pos);
        s.sd = sample_sd(pos);
        s.max = pos.back();
    }
    return s;
}

SnapshotStats snapshot_stats(int age, std::vector<std::int64_t>& cents) {
    SnapshotStats s;
    s.age = age;
    std::vector<double> values;
    values.reserve(cents.size());
    for (auto c : cents) {
        if (c == 0) ++s.n_zero;
        values.push_back(static_cast<double>(c) / 100.0);
    }
    s.percentiles = grid_percentiles(values);
    s.mean = mean(values);
    s.sd = sample_sd(values);
    s.max = values.back();
    return s;
}

}  // namespace

ReplicationResult run_replication(const TransitionModel& model,
                                  const DistributionSet& dists,
                                  const InitialLifePool& pool,
                                  const SimulationParams& params,
                                  int replication_index,
                                  const LifeObserver& observer) {
    params.validate();
    const std::uint64_t rep_seed =
        derive_seed(params.master_seed, static_cast<std::uint64_t>(replication_index));

    ReplicationResult result;
    result.summary.index = replication_index;
    result.lives.resize(static_cast<std::size_t>(params.n_lives));

    const std::size_t n_snapshots = params.snapshot_ages.size();
    std::vector<std::vector<std::int64_t>> snapshot_balances(n_snapshots);
    for (auto& v : snapshot_balances)
        v.resize(static_cast<std::size_t>(params.n_lives));

    std::vector<std::int64_t> finals(static_cast<std::size_t>(params.n_lives));
    std::vector<std::int64_t> hsa_totals(finals.size()), ci_totals(finals.size());
    std::vector<UsageCell> usage;

    auto& sum = result.summary;
    for (int i = 0; i < params.n_lives; ++i) {
        Rng rng(derive_seed(rep_seed, static_cast<std::uint64_t>(i)));
        const InitialLife initial = pool.sample(rng);
        const LifeTrajectory t = simulate_life(model, dists, initial, params, rng);
        if (observer) observer(i, t);

        LifeSummary& ls = result.lives[static_cast<std::size_t>(i)];
        ls.final_balance = t.final_balance.cents();
        ls.hsa_total = t.hsa_total.cents();
        ls.ci_total = t.ci_total.cents();
        ls.expense_total = t.expense_total.cents();
        ls.ci_uses = t.ci_use_count;

        sum.total_expenses += ls.expense_total;
        sum.total_hsa += ls.hsa_total;
        sum.total_ci += ls.ci_total;
        sum.total_deposits += t.deposits_total.cents();

        for (std::size_t a = 0; a < n_snapshots; ++a) {
            const int year = params.snapshot_ages[a] - 25;
            snapshot_balances[a][static_cast<std::size_t>(i)] =
                t.years[static_cast<std::size_t>(year)].balance_after.cents();
        }
        finals[static_cast<std::size_t>(i)] = ls.final_balance;
        hsa_totals[static_cast<std::size_t>(i)] = ls.hsa_total;
        ci_totals[static_cast<std::size_t>(i)] = ls.ci_total;

        if (static_cast<std::size_t>(t.ci_use_count) >= usage.size())
            usage.resize(static_cast<std::size_t>(t.ci_use_count) + 1);
        auto& cell = usage[static_cast<std::size_t>(t.ci_use_count)];
        ++cell.n_lives;
        cell.total_ci += ls.ci_total;
    }

    for (std::size_t a = 0; a < n_snapshots; ++a)
        sum.snapshots.push_back(
            snapshot_stats(params.snapshot_ages[a], snapshot_balances[a]));
    for (std::size_t k = 0; k < usage.size(); ++k) {
        usage[k].times = static_cast<int>(k);
        sum.usage.push_back(usage[k]);
    }

    sum.fb_n = static_cast<double>(finals.size());
    for (auto c : finals) {
        const double x = static_cast<double>(c) / 100.0;
        sum.fb_s1 += x;
        sum.fb_s2 += x * x;
        sum.fb_s3 += x * x * x;
    }
    sum.balance_stats = positive_stats(finals);
    sum.hsa_stats = positive_stats(hsa_totals);
    sum.ci_stats = positive_stats(ci_totals);
    return result;
}

StudyResult run_study(const TransitionModel& model, const DistributionSet& dists,
                      const Cohort& cohort, const SimulationParams& params,
                      const LifeObserver& observer) {
    params.validate();
    const InitialLifePool pool(cohort);

    StudyResult study;
    study.params = params;
    study.replications.resize(static_cast<std::size_t>(params.n_replications));
    study.lives.resize(static_cast<std::size_t>(params.n_replications));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= params.n_replications) return;
            ReplicationResult res =
                run_replication(model, dists, pool, params, r,
                                r == 0 ? observer : LifeObserver{});
            study.replications[static_cast<std::size_t>(r)] = std::move(res.summary);
            study.lives[static_cast<std::size_t>(r)] = std::move(res.lives);
        }
    };

    const int n_threads = std::min(params.threads, params.n_replications);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool_threads;
        pool_threads.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool_threads.emplace_back(worker);
        for (auto& t : pool_threads) t.join();
    }

    for (const auto& rep : study.replications) {
        study.total_expenses += rep.total_expenses;
        study.total_hsa += rep.total_hsa;
        study.total_ci += rep.total_ci;
        study.total_deposits += rep.total_deposits;
    }
    return study;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json to_json(const PositiveStats& s) {
    json j;
    j["n_total"] = s.n_total;
    j["n_zero"] = s.n_zero;
    j["has_positive"] = s.has_positive;
    j["percentiles"] = s.percentiles;
    j["mean"] = s.mean;
    j["sd"] = s.sd;
    j["max"] = s.max;
    return j;
}

PositiveStats positive_stats_from_json(const json& j) {
    PositiveStats s;
    s.n_total = j.at("n_total").get<std::int64_t>();
    s.n_zero = j.at("n_zero").get<std::int64_t>();
    s.has_positive = j.at("has_positive").get<bool>();
    s.percentiles = j.at("percentiles").get<std::vector<std::pair<double, double>>>();
    s.mean = j.at("mean").get<double>();
    s.sd = j.at("sd").get<double>();
    s.max = j.at("max").get<double>();
    return s;
}

json to_json(const ReplicationSummary& r) {
    json j;
    j["index"] = r.index;
    j["totals"] = {{"expenses", r.total_expenses},
                   {"hsa", r.total_hsa},
                   {"ci", r.total_ci},
                   {"deposits", r.total_deposits}};
    json snaps = json::array();
    for (const auto& s : r.snapshots) {
        snaps.push_back({{"age", s.age},
                         {"n_zero", s.n_zero},
                         {"percentiles", s.percentiles},
                         {"mean", s.mean},
                         {"sd", s.sd},
                         {"max", s.max}});
    }
    j["snapshots"] = snaps;
    json usage = json::array();
    for (const auto& u : r.usage)
        usage.push_back({{"times", u.times},
                         {"n_lives", u.n_lives},
                         {"total_ci", u.total_ci}});
    j["usage"] = usage;
    j["final_balance_moments"] = {
        {"n", r.fb_n}, {"s1", r.fb_s1}, {"s2", r.fb_s2}, {"s3", r.fb_s3}};
    j["balance_stats"] = to_json(r.balance_stats);
    j["hsa_stats"] = to_json(r.hsa_stats);
    j["ci_stats"] = to_json(r.ci_stats);
    return j;
}

ReplicationSummary replication_from_json(const json& j) {
    ReplicationSummary r;
    r.index = j.at("index").get<int>();
    const auto& t = j.at("totals");
    r.total_expenses = t.at("expenses").get<std::int64_t>();
    r.total_hsa = t.at("hsa").get<std::int64_t>();
    r.total_ci = t.at("ci").get<std::int64_t>();
    r.total_deposits = t.at("deposits").get<std::int64_t>();
    for (const auto& s : j.at("snapshots")) {
        SnapshotStats ss;
        ss.age = s.at("age").get<int>();
        ss.n_zero = s.at("n_zero").get<std::int64_t>();
        ss.percentiles =
            s.at("percentiles").get<std::vector<std::pair<double, double>>>();
        ss.mean = s.at("mean").get<double>();
        ss.sd = s.at("sd").get<double>();
        ss.max = s.at("max").get<double>();
        r.snapshots.push_back(std::move(ss));
    }
    for (const auto& u : j.at("usage")) {
        UsageCell c;
        c.times = u.at("times").get<int>();
        c.n_lives = u.at("n_lives").get<std::int64_t>();
        c.total_ci = u.at("total_ci").get<std::int64_t>();
        r.usage.push_back(c);
    }
    const auto& m = j.at("final_balance_moments");
    r.fb_n = m.at("n").get<double>();
    r.fb_s1 = m.at("s1").get<double>();
    r.fb_s2 = m.at("s2").get<double>();
    r.fb_s3 = m.at("s3").get<double>();
    r.balance_stats = positive_stats_from_json(j.at("balance_stats"));
    r.hsa_stats = positive_stats_from_json(j.at("hsa_stats"));
    r.ci_stats = positive_stats_from_json(j.at("ci_stats"));
    return r;
}

json params_to_json(const SimulationParams& p) {
    json j;
    j["n_lives"] = p.n_lives;
    j["n_replications"] = p.n_replications;
    j["master_seed"] = p.master_seed;
    j["snapshot_ages"] = p.snapshot_ages;
    j["hsa"] = {{"annual_deposit_cents", p.hsa.annual_deposit.cents()},
                {"annual_cap_cents", p.hsa.annual_cap.cents()},
                {"years", p.hsa.years},
                {"deposits", p.hsa.deposits}};
    j["breaks_cents"] = {p.breaks.f1_max.cents(), p.breaks.f2_max.cents(),
                         p.breaks.f3_max.cents()};
    return j;
}

// Missing keys keep their defaults so partial config files work.
SimulationParams params_from_json(const json& j) {
    SimulationParams p;
    if (j.contains("n_lives")) p.n_lives = j.at("n_lives").get<int>();
    if (j.contains("n_replications"))
        p.n_replications = j.at("n_replications").get<int>();
    if (j.contains("master_seed"))
        p.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("snapshot_ages"))
        p.snapshot_ages = j.at("snapshot_ages").get<std::vector<int>>();
    if (j.contains("hsa")) {
        const auto& h = j.at("hsa");
        if (h.contains("annual_deposit_cents"))
            p.hsa.annual_deposit =
                Money::from_cents(h.at("annual_deposit_cents").get<std::int64_t>());
        if (h.contains("annual_cap_cents"))
            p.hsa.annual_cap =
                Money::from_cents(h.at("annual_cap_cents").get<std::int64_t>());
        if (h.contains("years")) p.hsa.years = h.at("years").get<int>();
        if (h.contains("deposits")) p.hsa.deposits = h.at("deposits").get<int>();
    }
    if (j.contains("breaks_cents")) {
        const auto b = j.at("breaks_cents").get<std::vector<std::int64_t>>();
        if (b.size() != 3) throw std::runtime_error("breaks_cents needs 3 entries");
        p.breaks.f1_max = Money::from_cents(b[0]);
        p.breaks.f2_max = Money::from_cents(b[1]);
        p.breaks.f3_max = Money::from_cents(b[2]);
    }
    return p;
}

std::string rep_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "rep_%05d", index);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return json::parse(in);
}

}  // namespace

std::string simulation_params_to_json(const SimulationParams& params) {
    return params_to_json(params).dump(2);
}

SimulationParams simulation_params_from_json(const std::string& text) {
    return params_from_json(json::parse(text));
}

void write_study_dir(const StudyResult& study, const std::string& dir) {
    const fs::path root(dir);
    fs::create_directories(root / "replications");
    fs::create_directories(root / "lives");

    for (const auto& rep : study.replications)
        write_text(root / "replications" / (rep_name(rep.index) + ".json"),
                   to_json(rep).dump(2) + "\n");

    for (std::size_t r = 0; r < study.lives.size(); ++r) {
        std::ostringstream out;
        out << "life,final_balance_cents,hsa_total_cents,ci_total_cents,"
               "expense_total_cents,ci_uses\n";
        const auto& lives = study.lives[r];
        for (std::size_t i = 0; i < lives.size(); ++i) {
            const auto& l = lives[i];
            out << i << ',' << l.final_balance << ',' << l.hsa_total << ','
                << l.ci_total << ',' << l.expense_total << ',' << l.ci_uses
                << '\n';
        }
        write_text(root / "lives" / (rep_name(static_cast<int>(r)) + ".csv"),
                   out.str());
    }

    json summary;
    summary["params"] = params_to_json(study.params);
    summary["totals"] = {{"expenses", study.total_expenses},
                         {"hsa", study.total_hsa},
                         {"ci", study.total_ci},
                         {"deposits", study.total_deposits}};
    summary["n_replications"] = study.replications.size();
    write_text(root / "study_summary.json", summary.dump(2) + "\n");
}

StudyResult read_study_dir(const std::string& dir) {
    const fs::path root(dir);
    const json summary = load_json(root / "study_summary.json");

    StudyResult study;
    study.params = params_from_json(summary.at("params"));
    const auto& t = summary.at("totals");
    study.total_expenses = t.at("expenses").get<std::int64_t>();
    study.total_hsa = t.at("hsa").get<std::int64_t>();
    study.total_ci = t.at("ci").get<std::int64_t>();
    study.total_deposits = t.at("deposits").get<std::int64_t>();

    const auto n = summary.at("n_replications").get<std::size_t>();
    study.replications.reserve(n);
    study.lives.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        study.replications.push_back(replication_from_json(
            load_json(root / "replications" / (rep_name(static_cast<int>(r)) + ".json"))));

        std::ifstream in(root / "lives" / (rep_name(static_cast<int>(r)) + ".csv"));
        if (!in)
            throw std::runtime_error("missing lives file for replication " +
                                     std::to_string(r));
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            LifeSummary l;
            std::size_t idx;
            char comma;
            std::istringstream row(line);
            row >> idx >> comma >> l.final_balance >> comma >> l.hsa_total >>
                comma >> l.ci_total >> comma >> l.expense_total >> comma >>
                l.ci_uses;
            if (!row) throw std::runtime_error("malformed lives row: " + line);
            study.lives[r].push_back(l);
        }
    }
    return study;
}

bool identical(const StudyResult& a, const StudyResult& b) {
    if (a.total_expenses != b.total_expenses || a.total_hsa != b.total_hsa ||
        a.total_ci != b.total_ci || a.total_deposits != b.total_deposits)
        return false;
    if (a.lives != b.lives) return false;
    json ja = json::array(), jb = json::array();
    for (const auto& r : a.replications) ja.push_back(to_json(r));
    for (const auto& r : b.replications) jb.push_back(to_json(r));
    return ja == jb;
}

}  // namespace hsasim
