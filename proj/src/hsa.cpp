#include "hsasim/hsa.hpp"

namespace hsasim {

LifeTrajectory simulate_account(const InitialLife& initial,
                                const std::function<Money(int)>& expense_for_year,
                                const HsaParams& params) {
    params.validate();

    LifeTrajectory t;
    t.sex = initial.sex;
    t.years.reserve(static_cast<std::size_t>(params.years));

    Money balance;
    for (int y = 0; y < params.years; ++y) {
        if (y < params.deposits) {
            balance += params.annual_deposit;
            t.deposits_total += params.annual_deposit;
        }
        const Money expense = y == 0 ? initial.first_expense : expense_for_year(y);
        const YearOutcome out = apply_year(balance, expense, params);
        balance = out.balance_after;
        t.hsa_total += out.hsa_paid;
        t.ci_total += out.insurance_paid;
        t.expense_total += out.expense;
        if (out.insurance_used) ++t.ci_use_count;
        t.years.push_back(out);
    }
    t.final_balance = balance;
    return t;
}

}  // namespace hsasim
