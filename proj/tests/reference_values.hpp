// Generated by tests/oracle/reference_values.py (mpmath, 40 digits). Do not edit.
#pragma once

namespace ref {
inline constexpr double kLegendre25At07 = 0.14961506606215245107;
inline constexpr double kGegenbauerD3L12At03 = -0.055047139328;
inline constexpr double kGegenbauerD5L9AtM045 = 0.0291856905;
inline constexpr double kClausenCos25At1 = 0.3995108765802414114;
inline constexpr double kClausenCos13At005 = 2.3626951939116106394;
inline constexpr double kClausenSin37At03 = 0.36263750892055623585;
inline constexpr double kClausenSin11At2 = 0.59036596369836179515;
inline constexpr double kCircleKernel15At07 = 0.5233840325017145099;
inline constexpr double kCircleKernel075At2 = -0.81789082176492915925;
inline constexpr double kCircleKernel22At001 = 1.7767106450626905499;
inline constexpr double kCircleKernel6At3 = -0.23368099516158822874;
inline constexpr double kCircleDiagonal15 = 4.2512192242010368778;
inline constexpr double kEqualSpaced32L1S125 = 0.0167866611591126344;
}  // namespace ref
