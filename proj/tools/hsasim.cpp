// Batch pipeline front end: synth -> estimate -> simulate -> report.
// Every subcommand writes a manifest.json next to its outputs with
// resolved parameters and FNV-1a checksums of inputs and outputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsasim/ingest.hpp"
#include "hsasim/manifest.hpp"
#include "hsasim/markov.hpp"
#include "hsasim/model_io.hpp"
#include "hsasim/report.hpp"
#include "hsasim/sampler.hpp"
#include "hsasim/sim.hpp"
#include "hsasim/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hsasim;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void dump_json(const json& j, const fs::path& path) {
    write_file(path, j.dump(2) + "\n");
}

// Checksums every regular file under dir (except manifests) for the
// manifest's outputs map.
std::map<std::string, std::string> checksum_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename() == "manifest.json") continue;
        out[fs::relative(entry.path(), dir).string()] =
            fnv1a_hex(fnv1a_file(entry.path().string()));
    }
    return out;
}

RunManifest base_manifest(const std::string& command, int argc, char** argv) {
    RunManifest m;
    m.command = command;
    for (int i = 0; i < argc; ++i) m.argv.emplace_back(argv[i]);
    return m;
}

json meansd_json(const MeanSd& m) {
    json j;
    j["mean"] = m.mean;
    if (m.sd_defined)
        j["sd"] = m.sd;
    else
        j["sd"] = nullptr;
    return j;
}

// ---------------------------------------------------------------------------
// estimate: cohort descriptive tables

json stats_to_json(const StatsSummary& s) {
    json j;
    j["n"] = s.n;
    j["pct_no_expense"] = s.pct_no_expense;
    j["positive_only"] = s.positive_only;
    j["n_stat"] = s.n_stat;
    j["percentiles"] = s.percentiles;
    j["max"] = s.max;
    j["mean"] = s.mean;
    j["sd"] = s.sd;
    return j;
}

// Columns = study years, rows = the descriptive statistic set.
std::string render_stats_columns(
    const std::string& title,
    const std::vector<std::pair<std::string, StatsSummary>>& columns) {
    std::ostringstream out;
    out << title << '\n';
    auto cell = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return std::string(buf);
    };
    auto pad = [](const std::string& s, std::size_t w) {
        return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
    };
    const std::size_t w = 12;
    out << pad("", 14);
    for (const auto& [name, s] : columns) out << pad(name, w);
    out << '\n';

    auto row = [&](const std::string& name, auto get) {
        out << pad(name, 14);
        for (const auto& [cname, s] : columns) out << pad(get(s), w);
        out << '\n';
    };
    row("n", [&](const StatsSummary& s) { return std::to_string(s.n); });
    row("PctNoExpense", [&](const StatsSummary& s) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", s.pct_no_expense);
        return std::string(buf);
    });
    for (std::size_t qi = 0; qi < kDescriptivePercentiles.size(); ++qi) {
        const double q = kDescriptivePercentiles[qi];
        char name[16];
        if (q == static_cast<int>(q))
            std::snprintf(name, sizeof name, "p%d", static_cast<int>(q));
        else
            std::snprintf(name, sizeof name, "p%g", q * 10);
        row(name, [&, qi](const StatsSummary& s) {
            return s.n_stat ? cell(s.percentiles[qi].second) : std::string("-");
        });
    }
    row("max", [&](const StatsSummary& s) {
        return s.n_stat ? cell(s.max) : std::string("-");
    });
    row("mean", [&](const StatsSummary& s) {
        return s.n_stat ? cell(s.mean) : std::string("-");
    });
    row("sd", [&](const StatsSummary& s) {
        return s.n_stat ? cell(s.sd) : std::string("-");
    });
    return out.str();
}

std::vector<std::int64_t> expenses_of_year(const Cohort& cohort, int year,
                                           const PersonFilter& filter) {
    const int yi = cohort.year_index(year);
    std::vector<std::int64_t> out;
    for (const auto& p : cohort.persons) {
        if (filter && !filter(p)) continue;
        out.push_back(p.expenses[static_cast<std::size_t>(yi)].cents());
    }
    return out;
}

void write_descriptive_tables(const Cohort& cohort, const fs::path& dir) {
    fs::create_directories(dir);

    auto emit = [&](const std::string& stem, const std::string& title,
                    const PersonFilter& filter) {
        std::vector<std::pair<std::string, StatsSummary>> columns;
        json cols_json;
        for (int year : cohort.study_years) {
            const auto values = expenses_of_year(cohort, year, filter);
            if (values.empty()) continue;
            const StatsSummary s = descriptive_stats(values, true);
            columns.emplace_back(std::to_string(year), s);
            cols_json[std::to_string(year)] = stats_to_json(s);
        }
        if (columns.empty()) return;
        write_file(dir / (stem + ".txt"), render_stats_columns(title, columns));
        dump_json(cols_json, dir / (stem + ".json"));
    };

    emit("table_all", "Annual expenses, whole cohort (positive expenses)",
         nullptr);
    for (const Sex sex : kBothSexes) {
        emit("table_" + label(sex),
             "Annual expenses, sex " + label(sex) + " (positive expenses)",
             [sex](const PersonHistory& p) { return p.sex == sex; });
        for (int r = 0; r < kNumAgeRanges; ++r) {
            const auto range = static_cast<AgeRange>(r);
            // Age range evaluated per year: a person can move between
            // tables across years, matching per-year group sizes.
            std::vector<std::pair<std::string, StatsSummary>> columns;
            json cols_json;
            for (int year : cohort.study_years) {
                std::vector<std::int64_t> values;
                for (const auto& p : cohort.persons) {
                    if (p.sex != sex) continue;
                    const auto pr = range_for_age(p.age_at_end_of(year));
                    if (!pr || *pr != range) continue;
                    values.push_back(
                        p.expenses[static_cast<std::size_t>(
                                       cohort.year_index(year))]
                            .cents());
                }
                if (values.empty()) continue;
                const StatsSummary s = descriptive_stats(values, true);
                columns.emplace_back(std::to_string(year), s);
                cols_json[std::to_string(year)] = stats_to_json(s);
            }
            if (columns.empty()) continue;
            const std::string stem =
                "table_" + label(sex) + "_" + std::to_string(band(range).lo) +
                "_" + std::to_string(band(range).hi);
            write_file(dir / (stem + ".txt"),
                       render_stats_columns("Annual expenses, sex " + label(sex) +
                                                ", ages " + label(range) +
                                                " (positive expenses)",
                                            columns));
            dump_json(cols_json, dir / (stem + ".json"));
        }
    }
}

// ---------------------------------------------------------------------------
// report: table json emitters

json table5_json(const std::vector<BalanceSnapshotColumn>& table,
                 const std::string& provenance) {
    json cols = json::array();
    for (const auto& col : table) {
        json c;
        c["age"] = col.age;
        c["n_zero"] = meansd_json(col.n_zero);
        json pctls = json::array();
        for (const auto& [q, m] : col.percentiles)
            pctls.push_back({{"q", q}, {"value", meansd_json(m)}});
        c["percentiles"] = pctls;
        c["max"] = meansd_json(col.max);
        c["mean"] = meansd_json(col.mean);
        c["sd"] = meansd_json(col.sd);
        cols.push_back(std::move(c));
    }
    json j;
    j["data_provenance"] = provenance;
    j["columns"] = std::move(cols);
    return j;
}

json table6_json(const std::vector<CiUsageRow>& rows,
                 const std::string& provenance) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"times", r.times},
                       {"replications_present", r.reps_present},
                       {"n_lives", meansd_json(r.n_lives)},
                       {"pct_of_lives", meansd_json(r.pct_of_lives)},
                       {"total_ci", meansd_json(r.total_ci)},
                       {"pct_of_ci_total", r.pct_of_ci_total},
                       {"cum_pct_of_lives", r.cum_pct_of_lives},
                       {"cum_pct_of_ci", r.cum_pct_of_ci},
                       {"mean_ci_per_life", meansd_json(r.mean_ci_per_life)}});
    }
    json j;
    j["data_provenance"] = provenance;
    j["rows"] = std::move(out);
    return j;
}

json coverage_column_json(const CoverageColumn& col) {
    json c;
    c["name"] = col.name;
    c["pct_zero"] = meansd_json(col.pct_zero);
    c["any_positive"] = col.any_positive;
    json pctls = json::array();
    for (const auto& [q, m] : col.percentiles)
        pctls.push_back({{"q", q}, {"value", meansd_json(m)}});
    c["percentiles"] = pctls;
    c["max"] = meansd_json(col.max);
    c["mean"] = meansd_json(col.mean);
    c["sd"] = meansd_json(col.sd);
    return c;
}

json table7_json(const CoverageSummary& cs, const std::string& provenance) {
    json j;
    j["data_provenance"] = provenance;
    j["balance"] = coverage_column_json(cs.balance);
    j["hsa_coverage"] = coverage_column_json(cs.hsa);
    j["ci_coverage"] = coverage_column_json(cs.ci);
    j["skewness"] = cs.skewness;
    j["skewness_method"] = "adjusted Fisher-Pearson";
    j["outlier_method"] = "Tukey fences, 1.5 IQR";
    j["tukey_fences"] = {{"lower", cs.fences.lower}, {"upper", cs.fences.upper}};
    j["outliers"] = cs.outliers;
    return j;
}

std::string hist_csv(const std::vector<HistogramBin>& bins) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    for (const auto& b : bins)
        out << b.lo << ',' << b.hi << ',' << b.count << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_synth(const std::string& config_path, const std::string& out_path,
              int persons, std::int64_t seed, int argc, char** argv) {
    SynthCalibration calib = config_path.empty()
                                 ? default_calibration()
                                 : load_calibration(config_path);
    if (persons > 0) calib.n_persons = persons;
    if (seed >= 0) calib.seed = static_cast<std::uint64_t>(seed);

    const Dataset ds = generate_dataset(calib);
    const fs::path out(out_path);
    if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
    write_person_years(ds, out_path);

    RunManifest m = base_manifest("synth", argc, argv);
    m.data_provenance = "synthetic";
    json params;
    params["calibration_file"] = config_path;
    params["n_persons"] = calib.n_persons;
    params["seed"] = calib.seed;
    params["first_year"] = calib.first_year;
    params["n_years"] = calib.n_years;
    m.parameters_json = params.dump();
    if (!config_path.empty())
        m.inputs[config_path] = fnv1a_hex(fnv1a_file(config_path));
    m.outputs[out.filename().string()] = fnv1a_hex(fnv1a_file(out_path));
    write_manifest(m, out.parent_path().empty()
                          ? "."
                          : out.parent_path().string());

    std::cout << "wrote " << ds.records.size() << " rows for "
              << calib.n_persons << " persons to " << out_path << '\n';
    return 0;
}

int cmd_estimate(const std::string& data_path, const std::string& out_dir,
                 int argc, char** argv) {
    const Dataset ds = load_person_years(data_path);
    const auto filtered = filter_cohort(ds);
    const Cohort& cohort = filtered.cohort;

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    json filter_json;
    filter_json["kept"] = filtered.report.kept;
    filter_json["dropped_age_window"] = filtered.report.dropped_age_window;
    filter_json["dropped_incomplete_follow_up"] =
        filtered.report.dropped_incomplete;
    dump_json(filter_json, dir / "cohort_filter.json");

    const TransitionModel model = estimate_model(cohort);
    write_model(model, (dir / "model.json").string());

    const DistributionSet dists = DistributionSet::build(cohort);
    write_distributions(dists, (dir / "distributions.json").string());
    write_distribution_log_feed(dists, (dir / "distribution_log.csv").string(),
                                (dir / "distribution_zeros.json").string());

    const auto report = persistence_report(cohort);
    write_persistence(report, (dir / "persistence.json").string());
    write_file(dir / "persistence_heatmap.csv", persistence_heatmap_csv(report));
    write_homogeneity(homogeneity_diagnostic(report),
                      (dir / "homogeneity.json").string());

    // Age-interval variants (anchored at Jan 1 of the first study year).
    const Date anchor{cohort.study_years.front(), 1, 1};
    auto age_filter = [&](int lo, int hi) {
        return PersonFilter([&anchor, lo, hi](const PersonHistory& p) {
            const int age = age_at(p.birth_date, anchor);
            return age >= lo && age <= hi;
        });
    };
    for (const auto& [name, lo, hi] :
         {std::tuple{"persistence_21_40", 21, 40},
          std::tuple{"persistence_41_65", 41, 65}}) {
        try {
            const auto sub = persistence_report(cohort, age_filter(lo, hi));
            write_persistence(sub, (dir / (std::string(name) + ".json")).string());
            write_file(dir / (std::string(name) + "_heatmap.csv"),
                       persistence_heatmap_csv(sub));
        } catch (const std::runtime_error&) {
            // empty estimation set for this age interval; skip the export
        }
    }

    const auto shares = level_share_table(cohort);
    write_file(dir / "level_share.txt", render_level_share(shares));
    json shares_json = json::array();
    for (const auto& r : shares) {
        shares_json.push_back({{"sex", label(r.stratum.sex)},
                               {"age_range", label(r.stratum.age_range)},
                               {"counts", r.counts},
                               {"pct", r.pct},
                               {"total", r.total}});
    }
    dump_json(shares_json, dir / "level_share.json");

    write_descriptive_tables(cohort, dir / "cohort_tables");

    // Per-group mean feed for error-bar rendering: n, mean and sd per
    // (sex, age range at that year, year), zeros included, so any error
    // bar convention can be drawn downstream.
    {
        std::ostringstream out;
        out << "sex,age_range,year,n,mean,sd\n";
        for (const Sex sex : kBothSexes)
            for (int r = 0; r < kNumAgeRanges; ++r) {
                const auto range = static_cast<AgeRange>(r);
                for (int year : cohort.study_years) {
                    std::vector<double> values;
                    for (const auto& p : cohort.persons) {
                        if (p.sex != sex) continue;
                        const auto pr = range_for_age(p.age_at_end_of(year));
                        if (!pr || *pr != range) continue;
                        values.push_back(
                            p.expenses[static_cast<std::size_t>(
                                           cohort.year_index(year))]
                                .reais());
                    }
                    if (values.empty()) continue;
                    out << label(sex) << ',' << label(range) << ',' << year
                        << ',' << values.size() << ',' << mean(values) << ','
                        << sample_sd(values) << '\n';
                }
            }
        write_file(dir / "expense_means.csv", out.str());
    }

    RunManifest m = base_manifest("estimate", argc, argv);
    m.data_provenance = provenance_of(data_path);
    m.inputs[data_path] = fnv1a_hex(fnv1a_file(data_path));
    m.outputs = checksum_tree(dir);
    json params;
    params["data"] = data_path;
    params["kept"] = filtered.report.kept;
    m.parameters_json = params.dump();
    write_manifest(m, out_dir);

    std::cout << "estimated 16 stratum matrices from " << filtered.report.kept
              << " persons; artifacts in " << out_dir << '\n';
    return 0;
}

int cmd_simulate(std::string model_dir, std::string data_path,
                 const std::string& config_path, const std::string& out_dir,
                 const CLI::App* cmd, int lives, int replications,
                 std::int64_t seed, int threads, const std::string& preset,
                 int audit_lives, int argc, char** argv) {
    SimulationParams params;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open " + config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        params = simulation_params_from_json(text);
        // The config may also carry the artifact paths; flags win.
        const json j = json::parse(text);
        if (model_dir.empty() && j.contains("model_dir"))
            model_dir = j.at("model_dir").get<std::string>();
        if (data_path.empty() && j.contains("data"))
            data_path = j.at("data").get<std::string>();
    }
    if (model_dir.empty())
        throw std::runtime_error("no model directory (use --model or config)");
    if (data_path.empty())
        throw std::runtime_error("no data file (use --data or config)");
    if (preset == "paper") {
        params.n_lives = 10000;
        params.n_replications = 1000;
        params.hsa.annual_deposit = Money::from_reais(2500);
        params.hsa.annual_cap = Money::from_reais(5000);
        params.hsa.years = 41;
        params.hsa.deposits = 40;
        std::cerr << "preset paper: 10,000 lives x 1,000 replications takes"
                     " a while at desk scale; use --threads\n";
    }
    if (cmd->count("--lives")) params.n_lives = lives;
    if (cmd->count("--replications")) params.n_replications = replications;
    if (cmd->count("--seed"))
        params.master_seed = static_cast<std::uint64_t>(seed);
    if (cmd->count("--threads")) params.threads = threads;

    const TransitionModel model =
        read_model((fs::path(model_dir) / "model.json").string());
    const DistributionSet dists =
        read_distributions((fs::path(model_dir) / "distributions.json").string());
    params.breaks = model.breaks;

    const Dataset ds = load_person_years(data_path);
    const Cohort cohort = filter_cohort(ds).cohort;

    std::vector<std::string> audit_rows;
    LifeObserver observer;
    if (audit_lives > 0) {
        observer = [&audit_rows, audit_lives](int life, const LifeTrajectory& t) {
            if (life >= audit_lives) return;
            for (std::size_t y = 0; y < t.years.size(); ++y) {
                const auto& yo = t.years[y];
                std::ostringstream row;
                row << life << ',' << y << ',' << 25 + y << ','
                    << yo.expense.str() << ',' << yo.hsa_paid.str() << ','
                    << yo.insurance_paid.str() << ',' << yo.balance_after.str()
                    << ',' << (yo.insurance_used ? 1 : 0);
                audit_rows.push_back(row.str());
            }
        };
    }

    const StudyResult study = run_study(model, dists, cohort, params, observer);
    write_study_dir(study, out_dir);

    if (audit_lives > 0) {
        std::ostringstream out;
        out << "life,year_index,age,expense,hsa_paid,insurance_paid,"
               "balance_after,insurance_used\n";
        for (const auto& row : audit_rows) out << row << '\n';
        write_file(fs::path(out_dir) / "audit_lives.csv", out.str());
    }

    RunManifest m = base_manifest("simulate", argc, argv);
    std::string provenance = provenance_of(data_path);
    try {
        const RunManifest mm = read_manifest(model_dir);
        if (mm.data_provenance != "unspecified")
            provenance = mm.data_provenance;
    } catch (const std::exception&) {
    }
    m.data_provenance = provenance;
    m.inputs[data_path] = fnv1a_hex(fnv1a_file(data_path));
    m.inputs[(fs::path(model_dir) / "model.json").string()] =
        fnv1a_hex(fnv1a_file((fs::path(model_dir) / "model.json").string()));
    m.inputs[(fs::path(model_dir) / "distributions.json").string()] = fnv1a_hex(
        fnv1a_file((fs::path(model_dir) / "distributions.json").string()));
    if (!config_path.empty())
        m.inputs[config_path] = fnv1a_hex(fnv1a_file(config_path));
    m.outputs = checksum_tree(out_dir);
    m.parameters_json = simulation_params_to_json(params);
    write_manifest(m, out_dir);

    std::cout << "simulated " << params.n_lives << " lives x "
              << params.n_replications << " replications into " << out_dir
              << '\n';
    return 0;
}

int cmd_report(const std::string& study_dir, const std::string& out_dir,
               int argc, char** argv) {
    const StudyResult study = read_study_dir(study_dir);
    std::string provenance = "unspecified";
    try {
        provenance = read_manifest(study_dir).data_provenance;
    } catch (const std::exception&) {
    }

    const fs::path dir(out_dir);
    fs::create_directories(dir / "plots");

    const auto snapshots = balance_snapshots(study, study.params.snapshot_ages);
    write_file(dir / "table5.txt", render_balance_snapshots(snapshots));
    dump_json(table5_json(snapshots, provenance), dir / "table5.json");

    const auto usage = ci_usage_table(study);
    write_file(dir / "table6.txt", render_ci_usage(usage));
    dump_json(table6_json(usage, provenance), dir / "table6.json");

    const auto coverage = coverage_summary(study);
    write_file(dir / "table7.txt", render_coverage(coverage));
    dump_json(table7_json(coverage, provenance), dir / "table7.json");

    // Plot feeds over the pooled lives.
    std::vector<double> finals, severities, log_severities;
    std::ostringstream scatter;
    scatter << "total_expense,ci_share_pct,ci_uses\n";
    for (const auto& rep : study.lives) {
        for (const auto& l : rep) {
            finals.push_back(static_cast<double>(l.final_balance) / 100.0);
            const double ci = static_cast<double>(l.ci_total) / 100.0;
            severities.push_back(ci);
            if (l.ci_total >= 100)  // coverages under R$ 1 stay out of the log view
                log_severities.push_back(std::log(ci));
            const double expense = static_cast<double>(l.expense_total) / 100.0;
            scatter << expense << ','
                    << (l.expense_total
                            ? 100.0 * static_cast<double>(l.ci_total) /
                                  static_cast<double>(l.expense_total)
                            : 0.0)
                    << ',' << l.ci_uses << '\n';
        }
    }
    write_file(dir / "plots" / "final_balance_hist.csv",
               hist_csv(histogram(finals, 60)));
    write_file(dir / "plots" / "ci_severity_hist.csv",
               hist_csv(histogram(severities, 60)));
    write_file(dir / "plots" / "ci_severity_log_hist.csv",
               hist_csv(histogram(log_severities, 60)));
    write_file(dir / "plots" / "expense_ci_scatter.csv", scatter.str());

    RunManifest m = base_manifest("report", argc, argv);
    m.data_provenance = provenance;
    m.inputs[(fs::path(study_dir) / "study_summary.json").string()] = fnv1a_hex(
        fnv1a_file((fs::path(study_dir) / "study_summary.json").string()));
    m.outputs = checksum_tree(dir);
    json params;
    params["study"] = study_dir;
    m.parameters_json = params.dump();
    write_manifest(m, out_dir);

    std::cout << "tables and plot feeds written to " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stratified order-2 Markov estimation and HSA Monte Carlo"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic claims file");
    std::string synth_config, synth_out;
    int synth_persons = 0;
    std::int64_t synth_seed = -1;
    synth->add_option("--config", synth_config, "calibration JSON");
    synth->add_option("--out", synth_out, "output CSV path")->required();
    synth->add_option("--persons", synth_persons, "cohort size override");
    synth->add_option("--seed", synth_seed, "generator seed override");

    // estimate
    auto* estimate =
        app.add_subcommand("estimate", "estimate transition matrices and tables");
    std::string est_data, est_out;
    estimate->add_option("--data", est_data, "person-year CSV")->required();
    estimate->add_option("--out", est_out, "model output directory")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run the HSA Monte Carlo");
    std::string sim_model, sim_data, sim_config, sim_out;
    int sim_lives = 10000, sim_reps = 1000, sim_threads = 1, sim_audit = 0;
    std::int64_t sim_seed = 20052009;
    std::string sim_preset;
    simulate->add_option("--model", sim_model,
                         "model directory (or `model_dir` in the config)");
    simulate->add_option("--data", sim_data,
                         "person-year CSV (or `data` in the config)");
    simulate->add_option("--config", sim_config, "study config JSON");
    simulate->add_option("--out", sim_out, "results directory")->required();
    simulate->add_option("--lives", sim_lives, "lives per replication");
    simulate->add_option("--replications", sim_reps, "number of replications");
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--threads", sim_threads, "worker threads");
    simulate
        ->add_option("--preset", sim_preset,
                     "named preset; `paper` = 10k lives, 1k replications,"
                     " R$2,500 deposits x40, R$5,000 cap")
        ->check(CLI::IsMember({"paper"}));
    simulate->add_option("--audit-lives", sim_audit,
                         "export year-by-year rows for the first N lives of"
                         " replication 0");

    // report
    auto* report = app.add_subcommand("report", "tables and plot feeds");
    std::string rep_study, rep_out;
    report->add_option("--study", rep_study, "results directory")->required();
    report->add_option("--out", rep_out, "tables output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*synth)
            return cmd_synth(synth_config, synth_out, synth_persons, synth_seed,
                             argc, argv);
        if (*estimate) return cmd_estimate(est_data, est_out, argc, argv);
        if (*simulate)
            return cmd_simulate(sim_model, sim_data, sim_config, sim_out,
                                simulate, sim_lives, sim_reps, sim_seed,
                                sim_threads, sim_preset, sim_audit, argc, argv);
        if (*report) return cmd_report(rep_study, rep_out, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
