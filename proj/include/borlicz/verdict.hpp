#pragma once

#include <map>
#include <optional>
#include <string>

namespace borlicz {

// Outcome of a numerical asymptotic check. Growth and decay conditions of the
// "there exists x0" kind are never decidable from finitely many evaluations,
// so every checker reports one of three states over an explicit range.
enum class ConditionStatus {
    SatisfiedOnRange,
    ViolatedWithWitness,
    Inconclusive,
};

const char* to_string(ConditionStatus s);

struct ConditionVerdict {
    ConditionStatus status = ConditionStatus::Inconclusive;
    // Constants found by the search (K, C, x0, ...). Populated only when
    // status == SatisfiedOnRange.
    std::map<std::string, double> constants;
    // Point (or pair x <= y) at which the defining inequality fails by more
    // than the slack factor. Populated only when status == ViolatedWithWitness.
    std::optional<double> witness_x;
    std::optional<double> witness_y;
    double range_lo = 0.0;
    double range_hi = 0.0;
    std::string note;

    bool satisfied() const { return status == ConditionStatus::SatisfiedOnRange; }
    bool violated() const { return status == ConditionStatus::ViolatedWithWitness; }
    bool inconclusive() const { return status == ConditionStatus::Inconclusive; }

    static ConditionVerdict make_satisfied(double lo, double hi,
                                           std::map<std::string, double> constants,
                                           std::string note = {});
    static ConditionVerdict make_violated(double lo, double hi, double witness_x,
                                          std::optional<double> witness_y = std::nullopt,
                                          std::string note = {});
    static ConditionVerdict make_inconclusive(double lo, double hi, std::string note = {});
};

} // namespace borlicz
