#pragma once

// Bound values computed independently at 50 significant digits by
// tests/oracle/bounds_oracle.py. Natural logs of failure probabilities are
// stored so that tiny and vacuous values compare alike.
namespace mcp::reference {

// T1 at n = 256, d = 24, m = 8, kappa = 4, t = 0.965.
inline constexpr double kT1Epsilon = 1.8217425559610220868;
inline constexpr double kT1LogFail = -6.4642258822734592485;
// C2 at n = 10^6, kappa = 10 (base e): d = 30, m = 28, t = 1 - 1/n.
inline constexpr double kC2LogFail = -13.548616322784783436;
inline constexpr double kC2IntermediateLhs = -0.7090145444822421587;
inline constexpr double kC2IntermediateRhs = -13.815510557964274104;
// T2 at sigma = 1, r = 9, d = 1000, m = 5, kappa = 25; quadratic root at
// n = d = 10^6, sigma = 1, r = 4.
inline constexpr double kT2LogFail = -8.2082405307717550005;
inline constexpr double kT2QuadraticRoot = 1.4377777048500673473;
// T3 at n = 256, d = 100, m = 8, kappa = 4, t = 0.965, e = 1.
inline constexpr double kT3NoiseTerm = 0.53452248382484853199;
inline constexpr double kT3Epsilon = 1.799698072430757729;
// T4 at n = 10^4, d = 100, eps_n = 0.01, t = 0.965 with m = 10 (ceil ln n)
// and m = 14 (ceil log2 n).
inline constexpr double kT4EpsilonE = 7.6444455685020802111;
inline constexpr double kT4Epsilon2 = 1.6804534366372892102;
// T5 at n = 256, d = 128, m = 8, kappa = 2, tau = 0.9, (c1, c2) = (e, 1),
// (c1', c2') = (1, 1).
inline constexpr double kT5Epsilon = 0.27083333333333332819;
inline constexpr double kT5LogFail = 22.074466195307937404;
// Chi-square tails at d = 20, tau = 0.5.
inline constexpr double kChiLowerLog = -1.9314718055994530942;
inline constexpr double kChiUpperLog = -0.94534891891835618022;
// Raw T1 at the C1 choices for n = 256, kappa = 4 (base e): m = 6, d = 23.
inline constexpr double kC1RawEpsilon = 7.3808381197270632279;
inline constexpr double kC1RawLogFail = -10.409901386071172663;

}  // namespace mcp::reference
