#include "cpps/kpi.hpp"

#include <cmath>

namespace cpps {

namespace {

KpiValue flagged(std::string flag) {
    KpiValue v;
    v.ok = false;
    v.flag = std::move(flag);
    return v;
}

void append_flag(std::string& flags, const std::string& flag) {
    if (flag.empty()) return;
    if (!flags.empty()) flags += "; ";
    flags += flag;
}

} // namespace

KpiValue availability(const Number& total_time, const Number& down_time) {
    if (total_time <= Number::from_int(0)) return flagged("total-time-zero");
    if (down_time < Number::from_int(0) || down_time > total_time)
        return flagged("down-time-out-of-range");
    return {true, (total_time - down_time) / total_time, ""};
}

KpiValue performance(const Number& cycle_time, const Number& total_production,
                     const Number& operating_time) {
    if (operating_time <= Number::from_int(0)) return flagged("operating-time-zero");
    if (total_production < Number::from_int(0)) return flagged("negative-production");
    KpiValue v{true, cycle_time * total_production / operating_time, ""};
    if (v.value > Number::from_int(1)) v.flag = "over-unity";
    return v;
}

KpiValue quality(const Number& total, const Number& defected) {
    if (total == Number::from_int(0)) return flagged("zero-production");
    if (defected < Number::from_int(0) || defected > total)
        return flagged("defects-out-of-range");
    return {true, (total - defected) / total, ""};
}

KpiValue oee(const KpiValue& a, const KpiValue& p, const KpiValue& q) {
    std::string flags;
    append_flag(flags, a.flag);
    append_flag(flags, p.flag);
    append_flag(flags, q.flag);
    if (!a.ok || !p.ok || !q.ok) return flagged(std::move(flags));
    return {true, a.value * p.value * q.value, std::move(flags)};
}

KpiValues oracle_kpis(const GroundTruth& truth, const ScenarioConfig& config) {
    Number total_time = Number::from_int(config.duration_minutes);
    Number cycle = Number::from_int(config.cycle_time_minutes);
    KpiValues k;
    k.availability = availability(total_time, Number::from_int(truth.down_minutes));
    k.performance = performance(cycle, Number::from_int(truth.total_production),
                                Number::from_int(truth.operating_minutes));
    k.quality = quality(Number::from_int(truth.total_production),
                        Number::from_int(truth.defected));
    k.oee = oee(k.availability, k.performance, k.quality);
    return k;
}

bool kpi_close(const KpiValue& a, const KpiValue& b, double tolerance) {
    if (a.ok != b.ok) return false;
    if (!a.ok) return true;  // both value-less: they agree there is no number
    return std::abs(a.value.to_double() - b.value.to_double()) <= tolerance;
}

} // namespace cpps
