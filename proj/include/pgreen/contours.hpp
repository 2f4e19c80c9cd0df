#pragma once

#include "pgreen/green.hpp"
#include "pgreen/quadrature.hpp"
#include "pgreen/sturmian.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

namespace pgreen {

enum class PathKind { C1, C2, C3 };

[[nodiscard]] const char* to_string(PathKind k);

/// Straight-line energy contour.
///  C1: E = x + i y0, x ascending, physical sheet.
///  C2: E = x - i y0, x descending, physical sheet.
///  C3: E = x0 + s exp(-i phi), s descending (for phi = -pi/2: E = x0 + i y, y from +inf
///      to -inf); the part with Im E < 0 lies on the unphysical sheet.
struct PathSpec {
    PathKind kind = PathKind::C1;
    double y0 = 100.0;
    double x0 = 12.5;
    double phi = -std::numbers::pi / 2.0;

    [[nodiscard]] static PathSpec c1(double y0);
    [[nodiscard]] static PathSpec c2(double y0);
    [[nodiscard]] static PathSpec c3(double x0, double phi = -std::numbers::pi / 2.0);

    void validate() const;
};

/// E(s) = origin + direction * s over real s. When `continued` is set the
/// points with Im E < 0 are taken on the unphysical sheet (the line is
/// assumed to cross the cut at Re E > 0); otherwise every point is physical.
struct EnergyLine {
    cplx origin;
    cplx direction{1.0, 0.0};
    bool continued = false;

    [[nodiscard]] cplx energy(double s) const { return origin + direction * s; }
    [[nodiscard]] SheetedEnergy at(double s) const;
    /// Parameter of the point closest to z.
    [[nodiscard]] double closest(cplx z) const;
};

[[nodiscard]] EnergyLine path_line(const PathSpec& path);

struct PathPoint {
    SheetedEnergy energy;
    cplx measure; ///< dE/ds including the orientation of the path
};

/// Energy, sheet and oriented line element at parameter s (x for C1/C2, y for C3
/// with the default angle).
[[nodiscard]] PathPoint path_point(const PathSpec& path, double s);

/// dE/ds with orientation: +1 on C1, -1 on C2, -exp(-i phi) on C3.
[[nodiscard]] cplx path_measure(const PathSpec& path);

/// Map used for integrals along `line`: centred at the point closest to E = 0.
[[nodiscard]] LineMap line_map(const EnergyLine& line, const QuadratureConfig& quad);

/// Largest |s - center| with |E(s)| <= quad.energy_cap.
[[nodiscard]] double line_max_offset(const EnergyLine& line, const LineMap& map, const QuadratureConfig& quad);

/// (weight / 2 pi i) * integral over real s of G^{(+)}(t; E(s)) for the square
/// block of order nmax, computed by direct adaptive quadrature (symmetric limit
/// at infinity). Reference implementation for the interpolated GreenLine.
[[nodiscard]] Eigen::MatrixXcd line_integral_direct(const EnergyLine& line, cplx weight, double t, double k,
                                                    double b, int nmax, const QuadratureConfig& quad = {},
                                                    const CfConfig& cfg = {});

/// v = (1/2 pi i) * integral over the path of G^{(+)}_{row,col}(t; E) dE.
[[nodiscard]] cplx contour_integral_v(const PathSpec& path, double t, IndexPair row, IndexPair col, double k,
                                      double b, const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

/// Every element over square_indices(nmax) at once.
[[nodiscard]] Eigen::MatrixXcd contour_integral_block(const PathSpec& path, double t, int nmax, double k, double b,
                                                      const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

/// Piecewise Chebyshev interpolant of the square Green block along a line,
/// in the variable u of line_map. The interpolated quantity is
/// H(u) = G(E(u)) (E(u) - E_ref) with E_ref off the line, which tends to a
/// constant at both ends; samples are restricted to |E| <= energy_cap and
/// the outermost panels extrapolate up to u = +/-1.
class GreenLine {
public:
    GreenLine(EnergyLine line, double t, double k, double b, int nmax, const QuadratureConfig& quad,
              const CfConfig& cfg = {});

    /// Block dimension (nmax+1)^2.
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const EnergyLine& line() const { return line_; }
    [[nodiscard]] const LineMap& map() const { return map_; }
    [[nodiscard]] double t() const { return t_; }
    [[nodiscard]] int panels() const { return static_cast<int>(panels_.size()); }
    [[nodiscard]] int samples() const { return samples_; }

    /// Interpolated block at u in [-1, 1], entries flattened row-major.
    void eval_u(double u, Eigen::Ref<VectorXc> out) const;
    /// Interpolated block at line parameter s.
    void eval(double s, Eigen::Ref<VectorXc> out) const;
    [[nodiscard]] Eigen::MatrixXcd block(double s) const;
    /// Largest |u| at which the block was sampled.
    [[nodiscard]] double ucap() const { return ucap_; }

private:
    struct Panel {
        double a = 0.0;
        double b = 0.0;
        Eigen::MatrixXcd values; ///< dim x n samples at the Chebyshev points
    };

    EnergyLine line_;
    double t_;
    int dim_;
    LineMap map_;
    cplx e_ref_;
    double ucap_ = 1.0;
    int order_ = 16;
    std::vector<double> weights_;
    std::vector<double> cheb_unit_;
    std::vector<Panel> panels_;
    int samples_ = 0;

    [[nodiscard]] int locate(double u) const;
};

struct TracePoint {
    double s = 0.0;
    cplx value;  ///< measure * G_0 / (2 pi i): integrating over s gives v
    Sheet sheet = Sheet::physical;
};

/// Integrand of contour_integral_v for the (0,0;0,0) element at the given parameters.
[[nodiscard]] std::vector<TracePoint> integrand_trace(const PathSpec& path, double t, const std::vector<double>& samples,
                                                      double k, double b, const QuadratureConfig& quad = {},
                                                      const CfConfig& cfg = {});

/// CSV with header "s,Re,Im,sheet", numbers in scientific notation with 17 significant digits.
void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace);

/// Formats a double with 17 significant digits in scientific notation.
[[nodiscard]] std::string format_sci17(double x);

} // namespace pgreen
