#pragma once

namespace goldenrule {

// Airy function Ai and its derivative for |x| <= 200 (RangeError beyond).
// Ai underflows double precision for x > ~104; use airy_ai_scaled there.
double airy_ai(double x);
double airy_ai_prime(double x);

// Ai(x) exp(2/3 x^{3/2}) for x > 0, Ai(x) for x <= 0.
double airy_ai_scaled(double x);

// Zeros of Ai, a_1 > a_2 > ... (all negative), n >= 1, |a_n| <= 200.
double airy_ai_zero(int n);

}  // namespace goldenrule
