#include "hsasim/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hsasim {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line_no,
                       const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

Dataset read_person_years(std::istream& in, const std::string& origin) {
    static const std::string kHeader = "person_id,sex,birth_date,year,expense";

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw std::runtime_error(origin + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        fail(origin, line_no, "bad header, expected `" + kHeader + "`");

    Dataset ds;
    std::set<std::pair<std::string, int>> seen;
    std::map<std::string, std::pair<Sex, Date>> identities;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5)
            fail(origin, line_no, "expected 5 fields, got " +
                                      std::to_string(fields.size()));
        PersonYearRecord rec;
        rec.person_id = fields[0];
        if (rec.person_id.empty()) fail(origin, line_no, "empty person_id");
        try {
            rec.sex = sex_from_label(fields[1]);
            rec.birth_date = Date::parse(fields[2]);
            std::size_t pos = 0;
            rec.year = std::stoi(fields[3], &pos);
            if (pos != fields[3].size()) throw std::invalid_argument("trailing junk in year");
            rec.expense = Money::parse(fields[4]);
        } catch (const std::exception& e) {
            fail(origin, line_no, e.what());
        }

        if (!seen.insert({rec.person_id, rec.year}).second)
            fail(origin, line_no, "duplicate person-year (" + rec.person_id + ", " +
                                      std::to_string(rec.year) + ")");
        auto [it, inserted] =
            identities.try_emplace(rec.person_id, rec.sex, rec.birth_date);
        if (!inserted && (it->second.first != rec.sex ||
                          it->second.second != rec.birth_date))
            fail(origin, line_no,
                 "inconsistent sex/birth_date for person " + rec.person_id);

        ds.records.push_back(std::move(rec));
    }
    if (ds.records.empty()) throw std::runtime_error(origin + ": no data rows");

    int lo = ds.records.front().year, hi = lo;
    for (const auto& r : ds.records) {
        lo = std::min(lo, r.year);
        hi = std::max(hi, r.year);
    }
    for (int y = lo; y <= hi; ++y) ds.study_years.push_back(y);
    return ds;
}

Dataset load_person_years(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_person_years(in, path);
}

void write_person_years(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "person_id,sex,birth_date,year,expense\n";
    for (const auto& r : dataset.records)
        out << r.person_id << ',' << label(r.sex) << ',' << r.birth_date.str()
            << ',' << r.year << ',' << r.expense.str() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

CohortFilterResult filter_cohort(const Dataset& dataset,
                                 const CohortFilterParams& params) {
    if (dataset.records.empty()) throw std::runtime_error("empty dataset");
    if (dataset.study_years.empty())
        throw std::runtime_error("dataset has no study years");

    const int first_year = dataset.study_years.front();
    const int last_year = dataset.study_years.back();
    const Date start_anchor{first_year, 1, 1};
    const Date end_anchor{last_year, 12, 31};
    const std::size_t n_years = dataset.study_years.size();

    // Group rows per person, in id order for determinism.
    std::map<std::string, std::vector<const PersonYearRecord*>> by_person;
    for (const auto& r : dataset.records) by_person[r.person_id].push_back(&r);

    CohortFilterResult result;
    result.cohort.study_years = dataset.study_years;
    result.cohort.breaks = params.breaks;

    for (auto& [id, rows] : by_person) {
        const Date birth = rows.front()->birth_date;
        const int age_start = birth <= start_anchor ? age_at(birth, start_anchor) : -1;
        const int age_end = age_at(birth, end_anchor);
        if (age_start < params.min_age_at_start || age_end > params.max_age_at_end) {
            ++result.report.dropped_age_window;
            continue;
        }
        if (rows.size() != n_years) {
            ++result.report.dropped_incomplete;
            continue;
        }

        PersonHistory ph;
        ph.id = id;
        ph.sex = rows.front()->sex;
        ph.birth_date = birth;
        ph.expenses.resize(n_years);
        std::vector<bool> have(n_years, false);
        for (const auto* r : rows) {
            const std::size_t i = static_cast<std::size_t>(r->year - first_year);
            ph.expenses[i] = r->expense;
            have[i] = true;
        }
        if (std::find(have.begin(), have.end(), false) != have.end()) {
            // Rows exist but skip a year (e.g. two rows rejected earlier as
            // duplicates cannot happen; a year gap can).
            ++result.report.dropped_incomplete;
            continue;
        }
        ph.levels.reserve(n_years);
        for (const auto& e : ph.expenses)
            ph.levels.push_back(classify_level(e, params.breaks));
        if (n_years >= 3)
            ph.dominant = dominant_age_range(
                birth, MonthWindow{last_year - 2, 1, last_year, 12});
        result.cohort.persons.push_back(std::move(ph));
    }

    if (result.cohort.persons.empty()) throw std::runtime_error("empty cohort");
    result.report.kept = result.cohort.persons.size();
    return result;
}

Dataset to_dataset(const Cohort& cohort) {
    Dataset ds;
    ds.study_years = cohort.study_years;
    for (const auto& p : cohort.persons)
        for (std::size_t i = 0; i < cohort.study_years.size(); ++i)
            ds.records.push_back(PersonYearRecord{p.id, p.sex, p.birth_date,
                                                  cohort.study_years[i],
                                                  p.expenses[i]});
    return ds;
}

}  // namespace hsasim
