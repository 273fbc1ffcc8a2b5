#pragma once

#include <functional>
#include <vector>

#include "hsasim/money.hpp"
#include "hsasim/sampler.hpp"

namespace hsasim {

// Account rules. `years` is the simulated horizon (ages 25..25+years-1);
// `deposits` is how many of the leading years receive the employer
// deposit. They are separate knobs because the horizon and the deposit
// count need not agree (the paper-matching preset uses 41 years but 40
// deposits).
struct HsaParams {
    Money annual_deposit = Money::from_reais(2500);
    Money annual_cap = Money::from_reais(5000);
    int years = 41;
    int deposits = 41;

    void validate() const {
        if (annual_deposit.is_zero() || annual_cap.is_zero())
            throw std::invalid_argument("deposit and cap must be positive");
        if (years < 1 || deposits < 0 || deposits > years)
            throw std::invalid_argument("need 0 <= deposits <= years, years >= 1");
    }
};

struct YearOutcome {
    Money expense;
    Money hsa_paid;
    Money insurance_paid;
    Money balance_after;
    bool insurance_used = false;
};

struct LifeTrajectory {
    Sex sex = Sex::female;
    std::vector<YearOutcome> years;
    Money final_balance;
    Money hsa_total;
    Money ci_total;
    Money deposits_total;
    Money expense_total;
    int ci_use_count = 0;
};

// One account year, after the year's deposit (if any) has been credited
// into balance_before. The account covers the expense up to the annual
// cap or the balance, whichever is less; the catastrophic insurance pays
// the rest.
inline YearOutcome apply_year(Money balance_before, Money expense,
                              const HsaParams& params) {
    YearOutcome out;
    out.expense = expense;
    out.hsa_paid = min(expense, min(params.annual_cap, balance_before));
    out.insurance_paid = expense - out.hsa_paid;
    out.balance_after = balance_before - out.hsa_paid;
    out.insurance_used = !out.insurance_paid.is_zero();
    return out;
}

// Runs the whole account. Year 0 spends initial.first_expense; the
// provider supplies the expense for every later year index.
LifeTrajectory simulate_account(const InitialLife& initial,
                                const std::function<Money(int)>& expense_for_year,
                                const HsaParams& params);

}  // namespace hsasim
