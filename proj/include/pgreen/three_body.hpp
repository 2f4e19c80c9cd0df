#pragma once

#include "pgreen/contours.hpp"
#include "pgreen/green.hpp"
#include "pgreen/quadrature.hpp"
#include "pgreen/sturmian.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace pgreen {

/// Energies of the three channels at one node of the double contour integral.
struct EnergySharing {
    SheetedEnergy E1;
    SheetedEnergy E2;
    SheetedEnergy E3;
};

/// Label of a six-dimensional basis function. Flattening puts channel 1
/// slowest and the eta index within the xi index of each channel.
struct MultiIndex {
    int n1 = 0;
    int m1 = 0;
    int n2 = 0;
    int m2 = 0;
    int n3 = 0;
    int m3 = 0;

    [[nodiscard]] int max_index() const;
    /// Flat position for N basis functions per coordinate.
    [[nodiscard]] int flatten(int N) const;
    [[nodiscard]] static MultiIndex unflatten(int flat, int N);
    /// Flat position (n * N + m) of channel j in {1, 2, 3}.
    [[nodiscard]] int channel_index(int j, int N) const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// All N^6 labels in flattening order.
[[nodiscard]] std::vector<MultiIndex> all_multi_indices(int N);

/// Geometry of a double contour integral with both energies on the same kind
/// of straight line. With E_j = o_j + e s_j (j = 1, 2), the third energy
///   E3 = k12^2/2 + a1 (k23^2/2 - E1) + a2 (k13^2/2 - E2),
///   a1 = mu12/mu23, a2 = mu12/mu13,
/// moves on the line E3 = o_3 - e sigma with sigma = a1 s1 + a2 s2.
struct ThreeBodySetup {
    PathSpec path;
    PhysicalSystem sys;
    double b = 1.0;
    EnergyLine line1;
    EnergyLine line2;
    EnergyLine line3;
    cplx measure; ///< oriented dE/ds of lines 1 and 2
    double a1 = 0.0;
    double a2 = 0.0;

    /// Both contours are `path`; C2 is rejected since the paper-style sharing
    /// relation places E3 above the cut on the physical sheet only for C1 and C3.
    ThreeBodySetup(const PathSpec& path, const PhysicalSystem& sys, double b);

    [[nodiscard]] double sigma(double s1, double s2) const { return a1 * s1 + a2 * s2; }
    [[nodiscard]] EnergySharing sharing(double s1, double s2) const;
};

/// Validates a pair of paths for the double integrals: both C1 with equal
/// y0, or both C3 with equal parameters.
void check_path_pair(const PathSpec& p1, const PathSpec& p2);

/// k-independent integral of ln|(1 + beta x)/(1 - beta x)| / x over [-1, 1].
/// Equals pi^2/2 at beta = 1.
[[nodiscard]] double log_ratio_kernel(double beta);

struct WIntegrals {
    cplx w1;
    cplx w2;
    cplx w3;
    cplx V1; ///< integral of G_0(t23; E1) over s1 (symmetric limit, no measure)
    cplx V2; ///< integral of G_0(t13; E2) over s2
    cplx J3; ///< integral of G_0(t12; E3) over sigma
    cplx square_term1; ///< corner contribution of the square limit to w1
    cplx square_term2;
};

/// The three double integrals with prefactors a1, a2 and 1.
///
/// w1 and w2 converge only conditionally; they are defined as the limit of
/// growing squares |s1 - c1|, |s2 - c2| <= X. In that limit
///   w1 = P1 [V2 J3 / a1 + (A/e)(A/(d3 a1)) K(a2/a1)],  P1 = a1 m^2 / (2 pi i)^2,
/// where A = -2b is the large-energy coefficient of E G_0, m the measure, e and
/// d3 the directions of the energy lines and K the log_ratio_kernel. w3 factorizes.
[[nodiscard]] WIntegrals w_integrals(const PathSpec& path1, const PathSpec& path2, const PhysicalSystem& sys, double b,
                                     const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

struct Aleph {
    cplx alpha;
    cplx beta;
    cplx denominator; ///< 1 + alpha + beta
    std::optional<cplx> value; ///< 4 / (1 + alpha + beta); empty when degenerate
    bool degenerate = false;
};

/// alpha = w1/w3, beta = w2/w3, aleph = 4/(1 + alpha + beta); degenerate when
/// |1 + alpha + beta| < threshold. Throws DegenerateError when |w3| is negligible.
[[nodiscard]] Aleph normalization_aleph(cplx w1, cplx w2, cplx w3, double threshold = 1e-2);

/// Interpolated Green blocks along the three energy lines of a setup.
class ThreeBodyGreen {
public:
    ThreeBodyGreen(const ThreeBodySetup& setup, int nmax, const QuadratureConfig& quad, const CfConfig& cfg = {});

    [[nodiscard]] const ThreeBodySetup& setup() const { return setup_; }
    [[nodiscard]] int nmax() const { return nmax_; }
    [[nodiscard]] const GreenLine& line(int j) const;

    /// f(s1, s2, G1, G2, G3, out) fills out from the flattened square blocks.
    using Kernel = std::function<void(const VectorXc& g1, const VectorXc& g2, const VectorXc& g3,
                                      Eigen::Ref<VectorXc> out)>;

    /// (factor / (2 pi i)^2) m^2 times the absolutely convergent double integral
    /// over (s1, s2) of kernel(G1(s1), G2(s2), G3(sigma)).
    [[nodiscard]] VectorXc double_integral(const Kernel& kernel, int dim, const QuadratureConfig& quad,
                                           cplx factor = 1.0) const;

    /// Outer nodes used by the most recent double_integral call.
    [[nodiscard]] int last_outer_nodes() const { return last_evals_; }

private:
    ThreeBodySetup setup_;
    mutable int last_evals_ = 0;
    int nmax_;
    std::unique_ptr<GreenLine> g1_;
    std::unique_ptr<GreenLine> g2_;
    std::unique_ptr<GreenLine> g3_;
};

/// (aleph / ((2 pi i)^2 mu23 mu13)) m^2 times the double integral of the triple
/// Kronecker product of Green blocks, for the requested rows and columns.
[[nodiscard]] Eigen::MatrixXcd green6d_block(const ThreeBodyGreen& green, const std::vector<MultiIndex>& rows,
                                             const std::vector<MultiIndex>& cols, cplx aleph,
                                             const QuadratureConfig& quad);

/// Convenience overload building the interpolants for the path pair.
[[nodiscard]] Eigen::MatrixXcd green6d_block(const PathSpec& path1, const PathSpec& path2,
                                             const std::vector<MultiIndex>& rows,
                                             const std::vector<MultiIndex>& cols, const PhysicalSystem& sys, double b,
                                             cplx aleph, const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

/// Scalar (0,...,0) element of the double integral without the mass and aleph
/// prefactors: (m^2 / (2 pi i)^2) int int G_0 G_0 G_0.
[[nodiscard]] cplx scalar_element_i0(const ThreeBodyGreen& green, const QuadratureConfig& quad);

/// mu13 mu12 h1 (x) Q2 (x) Q3 + mu23 mu12 Q1 (x) h2 (x) Q3 + mu23 mu13 Q1 (x) Q2 (x) h3
/// on N basis functions per coordinate.
[[nodiscard]] Eigen::SparseMatrix<cplx, Eigen::RowMajor> assemble_h6(const PhysicalSystem& sys, double b, int N);

struct ProductCheck {
    cplx diag;              ///< [h G]_{0,0}
    double max_offdiag = 0; ///< max |[h G]_{0,N'}| over N' != 0
    VectorXc row;           ///< [h G]_{0,N'} for every N' with indices below N
    cplx aleph;
};

/// Row 0 of the product of assemble_h6(N) with the six-dimensional Green
/// matrix on the same basis; exact for the finite basis because h couples
/// row 0 only to labels with indices <= 1. Requires N >= 2.
[[nodiscard]] ProductCheck product_check(const ThreeBodyGreen& green, int N, cplx aleph,
                                         const QuadratureConfig& quad);

/// Per-channel blocks for the W-matrix identities: the 16 x 16 blocks over
/// indices {0, 1} of W3 (factorized) and of W1 in the square-limit definition.
struct WMatrices {
    Eigen::MatrixXcd W1;
    Eigen::MatrixXcd W2;
    Eigen::MatrixXcd W3;
};

[[nodiscard]] WMatrices w_matrices(const ThreeBodySetup& setup, const QuadratureConfig& quad,
                                   const CfConfig& cfg = {});

} // namespace pgreen
