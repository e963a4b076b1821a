#pragma once

#include <string>
#include <vector>

#include "cuspbc/coalescence.hpp"

namespace cuspbc::cli {

/// Parses a pair preset:
///   e-nucleus Z=<charge> [A=<mass number>]   (A absent: fixed nucleus)
///   e-e [singlet|triplet]
///   custom q1=.. q2=.. m1=.. m2=..           (m = inf for a fixed particle)
/// fixed_nucleus drops A. ParseError carries the column of the offending
/// token within the space-joined problem.
CoalescencePair parse_pair_preset(const std::vector<std::string>& tokens, bool fixed_nucleus = false);

/// Canonical text of a pair for report metadata.
std::string describe_pair(const CoalescencePair& pair);

}  // namespace cuspbc::cli
