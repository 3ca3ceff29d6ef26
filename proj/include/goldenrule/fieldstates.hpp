#pragma once

#include <optional>
#include <string>
#include <vector>

namespace goldenrule {

// Particle of mass m in a uniform force F (hbar = 1), length scale
// a = (1/(2 m F))^{1/3}.
struct UniformFieldState {
    double F;
    double m;
    double a;
    double E;
};

UniformFieldState make_uniform_field_state(double F, double m, double E = 0.0);
double field_length(double F, double m);

// Energy-normalized stationary state (1/(a sqrt F)) Ai(-(x + E/F)/a).
double field_wavefunction(double x, double E, double F, double m);

struct XWindow {
    double lo;
    double hi;
};

struct OverlapResult {
    double ratio;  // G / g_sigma(0)
    double G;
    double drift;  // relative change when the window's upper end is pulled in
    XWindow window;
};

// G(E1) = int dE' g_sigma(E' - E1) int dx Psi(x,E1) Psi(x,E'), as a ratio to
// the exact value 1/(sigma sqrt(2 pi)). sigma <= 0 selects 0.5 F a. The
// default window reaches 30 a into the forbidden region and into the allowed
// region by max(40 wavelengths, 13 (F a / sigma)^2 a), capped by the Airy
// range. Throws WindowError when the last fifth of the window changes the
// result by more than drift_tol.
OverlapResult smeared_overlap(double E1, double sigma, double F, double m,
                              std::optional<XWindow> window = std::nullopt, double drift_tol = 5e-3);

// 2 pi sqrt(D): converts matrix elements between wave-vector-normalized and
// energy-normalized final states.
double energy_normalize_planewave(double D_at_E_phi);

// Elastic scattering of a box-normalized 2D plane wave (area A, wavevector
// k along phi = 0) by V(r) = V0 exp(-r^2 / (2 b^2)), isotropic medium with
// E = k^2 / (2 m).
struct Scatterer2D {
    double V0;
    double b;
    double m;
    double k;
    double area;
};

// Through energy-normalized final states: int dphi 2 pi |<E,phi|V|i>|^2.
double scattering_rate_energy_normalized(const Scatterer2D& s, int n_angles = 256);
// Through box-normalized final states, channel-averaged |V|^2 and explicit
// total density: 2 pi <|V|^2> D.
double scattering_rate_explicit_dos(const Scatterer2D& s, int n_angles = 256);

// 1D delta-well bound state sqrt(kappa) e^{-kappa |x|}, E_b = -kappa^2/(2m) + offset.
struct BoundState1D {
    double kappa;
    double m;
    double energy_offset = 0.0;  // e.g. a Stark shift supplied by the caller
    double energy() const { return -kappa * kappa / (2.0 * m) + energy_offset; }
};

struct IonizationResult {
    double rate;
    double matrix_element;
    double identity_matrix_element;  // -(kappa/m) sqrt(kappa) Psi(0, E_b)
    double bound_overlap;            // <Psi(., E_b)|psi_b>, diagnostic only
    bool weak_field;                 // F / (kappa |E_b|) <= 0.1
    XWindow window;
};

// r = 2 pi |<Psi(., E_b)| -F x |psi_b>|^2 with energy-normalized final states.
IonizationResult toy_ionization_rate(const BoundState1D& bound, double F, std::optional<XWindow> window = std::nullopt);

struct BoxResult {
    double rate;
    double wall;         // position L of the hard wall down field
    int level;           // Airy zero index of the level placed at E_b
    double density;      // 1 / level spacing at E_b
    double matrix_element;
};

// Same rate from unit-normalized states of a box with a hard wall at L down
// field (L placed so that one level sits at E_b) and the explicit level density.
BoxResult box_quantized_rate(const BoundState1D& bound, double F, int level = 400);

// x, psi rows for plotting.
std::string wavefunction_csv(double E, double F, double m, double x0, double x1, int n,
                             const std::vector<std::string>& header = {});

}  // namespace goldenrule
