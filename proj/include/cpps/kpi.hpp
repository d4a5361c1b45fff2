#pragma once

#include <string>

#include "cpps/number.hpp"
#include "cpps/simulator.hpp"

namespace cpps {

/// One KPI figure. `ok == false` means there is no number (a degenerate day:
/// zero total time, zero operating time, zero production) and `flag` names
/// why. `ok == true` with a non-empty flag is a warning on a real value —
/// performance past 1.0 is reported unclamped but flagged.
struct KpiValue {
    bool ok = true;
    Number value;
    std::string flag;

    friend bool operator==(const KpiValue& a, const KpiValue& b) {
        return a.ok == b.ok && a.flag == b.flag && (!a.ok || a.value == b.value);
    }
};

/// (total_time - down_time) / total_time, exact.
/// Flags: total-time-zero, down-time-out-of-range.
KpiValue availability(const Number& total_time, const Number& down_time);

/// cycle_time * total_production / operating_time, exact and unclamped.
/// Flags: operating-time-zero, negative-production; warning: over-unity.
KpiValue performance(const Number& cycle_time, const Number& total_production,
                     const Number& operating_time);

/// (total - defected) / total, exact.
/// Flags: zero-production, defects-out-of-range.
KpiValue quality(const Number& total, const Number& defected);

/// availability * performance * quality. Any flagged input flags the output
/// (flags join with "; "); warnings on valid inputs carry through the same
/// way on a valid product.
KpiValue oee(const KpiValue& a, const KpiValue& p, const KpiValue& q);

/// The daily quadruple.
struct KpiValues {
    KpiValue availability;
    KpiValue performance;
    KpiValue quality;
    KpiValue oee;
};

/// Closed-form KPIs straight from the ground truth — the oracle the engine
/// pipeline is measured against. Uses the scenario's duration as the total
/// time and its cycle time as the theoretical pace; no engine involved.
KpiValues oracle_kpis(const GroundTruth& truth, const ScenarioConfig& config);

/// True when the two figures agree: both flagged as value-less, or both
/// valid with |a - b| <= tolerance.
bool kpi_close(const KpiValue& a, const KpiValue& b, double tolerance);

} // namespace cpps
