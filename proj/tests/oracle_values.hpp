// Generated by tests/oracles/derive.py; do not edit by hand.
#pragma once

namespace oracle {

inline constexpr double kQuartileSample[] = {0.42, 0.17, 0.88, 0.5, 0.63, 0.1, 0.9, 0.35, 0.71, 0.29, 0.55};
inline constexpr double kNpvTableII = 63210.611573508403429;
inline constexpr double kEurPerPercent = 3160.5305786754201714;
inline constexpr double kStress50 = 2959.6;
inline constexpr double kArrhenius = 0.000043085813431696923579;
inline constexpr double kCalStep50Age0Dt60 = 0.0033603620326849168597;
inline constexpr double kCalStep50Age10Dt60 = 0.000014001265396216196433;
inline constexpr double kCalStep30Age10Dt60 = 0.000013840418314356705056;
inline constexpr double kCalStep90Age10Dt60 = 0.000029520170317741946797;
inline constexpr double kCalSecantAtQuarter = 0.13984550914357006028;
inline constexpr double kCalCurveAtQuarter = 0.18580114584172235531;
inline constexpr double kCycleFactorAtOneC = 0.0011819391636732720053;
inline constexpr double kCycleFullVsHalfRatio = 1.2154932968106364702;
inline constexpr double kCycleK = 5.1113617178015368637;
inline constexpr double kCycleMaxRelErr = 0.29611894821965933804;
inline constexpr double kCycleRelErrAtMax = 0.0877996447375415504;
inline constexpr double kCycleFullScaleErr = 0.0877996447375415504;
inline constexpr double kCycleMinimaxRelErr = 0.17385103338626398487;
inline constexpr double kDuFrac4985 = 0.125;
inline constexpr double kDuStep4985 = 0.0020833333333333333333;
inline constexpr double kQuartileQ1 = 0.31999999999999995;
inline constexpr double kQuartileQ2 = 0.5;
inline constexpr double kQuartileQ3 = 0.6699999999999999;

}  // namespace oracle
