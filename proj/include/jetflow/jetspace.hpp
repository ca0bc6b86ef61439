#pragma once

// The jet-bundle apparatus: adapted frames and coframes, the Sasaki-like
// metric, Liouville relative 1-forms, (poly)symplectic relative 2-forms, and
// the Hamilton systems they generate. Coordinates on J^1(T,M) are ordered
// z = (t^1..t^p, x^1..x^n, x^1_1, x^1_2, ..., x^n_p).

#include <vector>

#include "jetflow/field.hpp"
#include "jetflow/integrate.hpp"
#include "jetflow/prolongation.hpp"

namespace jetflow {

inline std::size_t jet_dim(std::size_t p, std::size_t n) { return p + n + n * p; }
inline std::size_t z_t(std::size_t alpha) { return alpha; }
inline std::size_t z_x(std::size_t p, std::size_t i) { return p + i; }
inline std::size_t z_v(std::size_t p, std::size_t n, std::size_t i, std::size_t alpha) {
    (void)n;
    return p + n + i * p + alpha;
}

/// Adapted frame vectors (columns of `frame`) and coframe covectors (rows of
/// `coframe`) in the coordinate basis; coframe * frame is the identity.
struct FrameBasis {
    Mat frame;
    Mat coframe;
};

FrameBasis frames_at(const MetricSpec& h, const MetricSpec& g, const JetPoint& jp);

/// Max deviation of the duality pairing from the identity.
double frame_duality_residual(const FrameBasis& fb);

/// S1 = h_ab dt^a dt^b + g_ij dx^i dx^j + h^{ab} g_ij dxv^i_a dxv^j_b,
/// pulled back to the coordinate basis through the adapted coframe.
Mat sasaki_metric_at(const MetricSpec& h, const MetricSpec& g, const JetPoint& jp);

enum class FormVariant { Plain, Shifted };

/// Per-alpha components of a relative form Q = Q_alpha (x) dt^alpha, stored
/// as coefficients in the coordinate cobasis.
struct RelativeForm {
    int degree = 1;
    FormVariant variant = FormVariant::Plain;
    std::vector<Vec> one; // degree 1: per alpha, length jet_dim
    std::vector<Mat> two; // degree 2: per alpha, antisymmetric jet_dim^2
};

/// theta_alpha = g_ij x^i_alpha dx^j sqrt|det h| (plain), with the X-shifted
/// variant subtracting g_ij X^i_alpha dx^j.
RelativeForm liouville_theta(const DistTensorField& f, const JetPoint& jp, FormVariant variant);

/// Omega_alpha = g_ij dx^i wedge dxv^j_alpha sqrt|det h| (plain); the shifted
/// variant adds omega_{ij alpha} dx^i wedge dx^j and g_ij (D_b X^i_alpha)
/// dt^b wedge dx^j.
RelativeForm symplectic_omega(const DistTensorField& f, const JetPoint& jp, FormVariant variant);

/// Max coefficient of Omega_alpha + d theta_alpha, with d theta computed by
/// exact differentiation of the coordinate coefficients.
double check_omega_eq_minus_dtheta(const DistTensorField& f, const JetPoint& jp,
                                   FormVariant variant);

/// Constitutive momenta u^{ai} = h^{ab} x^i_b, the prescribed contracted
/// covariant rate (delta u^{ai} / dt^a), and the scalar side condition
/// (max over the free t-index).
struct HamiltonEval {
    Mat u;            // p x n
    Vec du;           // n
    double condition; // max_gamma |condition_gamma|
};

HamiltonEval hamilton_system(const DistTensorField& f, const JetPoint& jp, FormVariant variant);

/// The second-order dynamics encoded by the Hamilton system (p == 1):
/// covariant acceleration = h_11 * prescribed du.
SecondOrderSystem hamilton_second_order(const DistTensorField& f, FormVariant variant);

/// Along a sampled solution, compares the finite-difference covariant rate of
/// u^{ai} (with H and G corrections) against the prescribed du; O(step^2)
/// for true solutions of the corresponding dynamics.
double hamilton_consistency(const Trajectory& traj, const DistTensorField& f, FormVariant variant);
double hamilton_consistency(const Sheet& sheet, const DistTensorField& f, FormVariant variant);

} // namespace jetflow
