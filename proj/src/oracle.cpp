#include "gkplab/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gkplab/constants.hpp"
#include "gkplab/fft.hpp"

// Synthesis closed form
// ---------------------
// A branch is  amp * Int d^n u d^n v  eta(u, v) D(u, v) |ideal>,  where
// D(u, v) = e^{i u.v/2} X(u) Z(v) per mode and eta is a complex Gaussian with
// covariance Sigma = sigma^2 * V, mean mu = sqrt(pi) * mean, and phase
// gradient gamma = sqrt(pi) * grad (phase gamma . w).  Writing the ideal comb
// layer as sum_S c(S) |q = S>, the position amplitude of X(u) Z(v) |q=S> is
// e^{i v.(S + u/2)} delta(x - S - u), so the u-integral collapses onto
// u = x - S and the v-integral is the Fourier transform of the conditional
// Gaussian eta(v | u), giving (up to a branch-independent constant)
//
//   psi(x) = sum_S c(S) exp(-(u-mu_u)' Iuu (u-mu_u)/2) e^{i gamma_u . u}
//            * exp(-kappa' Stilde kappa / 2) e^{i kappa . vbar(u)}
//   u = x - S,  kappa = gamma_v + (x + S)/2,
//   vbar(u) = mu_v + B (u - mu_u),  B = Sigma_vu Iuu,  Iuu = Sigma_uu^{-1},
//   Stilde = Sigma_vv - B Sigma_uv   (conditional v-covariance).
//
// The exp(-kappa' Stilde kappa / 2) factor is the familiar midpoint-evaluated
// envelope: for one mode with Sigma = diag(delta^2, kappa^2) it reduces to
// exp(-kappa^2 ((x+S)/2)^2 / 2).

namespace gkp::oracle {

namespace {

constexpr double kAliasTol = 1e-10;
constexpr double kSelfDualRelTol = 1e-9;
// Tooth windows keep every Gaussian factor above exp(-kTailExp).
constexpr double kTailExp = 46.0;

struct AxisView {
    std::size_t stride = 1;  // step between consecutive samples along the axis
    std::size_t block = 1;   // stride * points
    std::size_t lines = 1;   // number of independent lines
    std::size_t points = 1;
};

AxisView axis_view(const GridSpec& s, std::size_t axis) {
    if (axis >= s.modes) throw ContractViolation("grid axis out of range");
    AxisView v;
    v.points = s.points;
    v.stride = 1;
    for (std::size_t k = axis + 1; k < s.modes; ++k) v.stride *= s.points;
    v.block = v.stride * s.points;
    v.lines = s.size() / s.points;
    return v;
}

std::size_t line_base(const AxisView& v, std::size_t line) {
    const std::size_t outer = line / v.stride;
    const std::size_t inner = line % v.stride;
    return outer * v.block + inner;
}

void gather_line(const GridWavefunction& w, const AxisView& v, std::size_t line,
                 std::vector<std::complex<double>>& buf) {
    const std::size_t base = line_base(v, line);
    buf.resize(v.points);
    for (std::size_t k = 0; k < v.points; ++k) buf[k] = w.amp[base + k * v.stride];
}

void scatter_line(GridWavefunction& w, const AxisView& v, std::size_t line,
                  const std::vector<std::complex<double>>& buf) {
    const std::size_t base = line_base(v, line);
    for (std::size_t k = 0; k < v.points; ++k) w.amp[base + k * v.stride] = buf[k];
}

void require_self_dual(const GridSpec& s, const char* what) {
    if (!s.is_self_dual())
        throw ContractViolation(std::string(what) +
                                " requires a self-dual grid (dx = sqrt(2*pi/M))");
}

/// Translates one gathered line by `shift` (same units as dx) using the exact
/// periodic Fourier shift theorem.
void fourier_translate_line(std::vector<std::complex<double>>& line, double dx, double shift) {
    const std::size_t m = line.size();
    const double dp = 2.0 * kPi / (static_cast<double>(m) * dx);
    fft::centered_ft(line, dx, +1);
    for (std::size_t k = 0; k < m; ++k) {
        const double p = (static_cast<double>(k) - static_cast<double>(m) / 2.0) * dp;
        line[k] *= std::polar(1.0, -p * shift);
    }
    fft::centered_ft(line, dp, -1);
}

/// In-place coordinate shear along `axis`: the support point moves as
/// x_axis -> x_axis + a * x_other (other coordinates fixed), implemented as a
/// per-line Fourier translation.
void shear(GridWavefunction& w, std::size_t axis, std::size_t other, double a) {
    const AxisView va = axis_view(w.spec, axis);
    const AxisView vo = axis_view(w.spec, other);
    const double dx = w.spec.dx();
    std::vector<std::complex<double>> buf;
    for (std::size_t line = 0; line < va.lines; ++line) {
        const std::size_t base = line_base(va, line);
        const std::size_t oidx = (base / vo.stride) % w.spec.points;
        const double xo = w.spec.coord(oidx);
        if (xo == 0.0) continue;
        gather_line(w, va, line, buf);
        fourier_translate_line(buf, dx, a * xo);
        scatter_line(w, va, line, buf);
    }
}

struct CombGeometry {
    double spacing = 1.0;  // absolute tooth spacing
    double offset = 0.0;   // absolute offset of tooth k = 0
    bool alternating = false;
};

CombGeometry comb_geometry(states::IdealLogical label, std::uint8_t x_flag) {
    const states::CombSpec cs = states::comb_of(label, states::Quadrature::Q);
    CombGeometry g;
    g.spacing = kSqrtPi * static_cast<double>(cs.spacing);
    g.offset = kSqrtPi * (static_cast<double>(cs.offset) + static_cast<double>(x_flag));
    g.alternating = cs.alternating;
    return g;
}

}  // namespace

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (std::size_t k = 0; k < modes; ++k) s *= points;
    return s;
}

bool GridSpec::is_self_dual() const {
    const double ideal = std::sqrt(2.0 * kPi / static_cast<double>(points));
    return std::fabs(dx() - ideal) <= kSelfDualRelTol * ideal;
}

GridSpec GridSpec::self_dual(std::size_t modes, std::size_t points) {
    if (points == 0) {
        if (modes <= 1) points = 2048;
        else if (modes == 2) points = 512;
        else points = 256;
    }
    GridSpec s;
    s.modes = modes;
    s.points = points;
    s.extent = std::sqrt(kPi * static_cast<double>(points) / 2.0);
    validate(s);
    return s;
}

void validate(const GridSpec& spec) {
    if (spec.modes == 0) throw ContractViolation("grid must have at least one mode");
    if (spec.modes > 3) throw CapacityError("grid oracle supports at most 3 modes");
    if (!fft::is_pow2(spec.points))
        throw ContractViolation("grid points per mode must be a power of two");
    const std::size_t min_points = spec.modes == 1 ? 1024 : 256;
    if (spec.points < min_points)
        throw ContractViolation("grid too coarse: need >= " + std::to_string(min_points) +
                                " points per mode");
    if (!(spec.extent >= 6.0 * kSqrtPi - 1e-12))
        throw ContractViolation("grid extent must be at least 6 sqrt(pi)");
}

std::size_t GridWavefunction::index(const std::vector<std::size_t>& multi) const {
    if (multi.size() != spec.modes) throw ContractViolation("grid index arity mismatch");
    std::size_t idx = 0;
    for (std::size_t a = 0; a < spec.modes; ++a) {
        if (multi[a] >= spec.points) throw ContractViolation("grid index out of range");
        idx = idx * spec.points + multi[a];
    }
    return idx;
}

double l2_norm(const GridWavefunction& w) {
    double s = 0.0;
    for (const auto& v : w.amp) s += std::norm(v);
    double measure = 1.0;
    for (std::size_t a = 0; a < w.spec.modes; ++a) measure *= w.spec.dx();
    return std::sqrt(s * measure);
}

void normalize(GridWavefunction& w) {
    const double nrm = l2_norm(w);
    if (!(nrm > 0.0)) throw DegenerateConditioning("cannot normalize a zero wavefunction");
    for (auto& v : w.amp) v /= nrm;
}

GridWavefunction synthesize(const states::SingleQubitState& state, const GridSpec& spec) {
    validate(spec);
    if (spec.modes != 1) throw ContractViolation("single-qubit synthesis needs a 1-mode grid");
    const auto& env = state.env;
    const CombGeometry comb = comb_geometry(state.label, 0);

    GridWavefunction w;
    w.spec = spec;
    w.amp.assign(spec.points, {0.0, 0.0});
    const double reach = std::sqrt(2.0 * kTailExp * env.delta2) + std::fabs(env.mean_u);
    const long long kw = static_cast<long long>(std::ceil(reach / comb.spacing)) + 1;
    for (std::size_t m = 0; m < spec.points; ++m) {
        const double x = spec.coord(m);
        const long long kc = std::llround((x - comb.offset) / comb.spacing);
        std::complex<double> acc{0.0, 0.0};
        for (long long k = kc - kw; k <= kc + kw; ++k) {
            const double tooth = comb.offset + comb.spacing * static_cast<double>(k);
            const double u = x - tooth;
            const double eu = (u - env.mean_u) * (u - env.mean_u) / (2.0 * env.delta2);
            const double mid = 0.5 * (x + tooth);
            const double ev = 0.5 * env.kappa2 * mid * mid;
            if (eu + ev > 2.0 * kTailExp) continue;
            double sign = 1.0;
            if (comb.alternating && (k % 2 != 0)) sign = -1.0;
            acc += sign * std::exp(-eu - ev) * std::polar(1.0, env.mean_v * mid);
        }
        w.amp[m] = acc;
    }
    normalize(w);
    return w;
}

GridWavefunction synthesize(const graph::GkpGraphState<double>& state, const GridSpec& spec) {
    if (state.n() > 3) throw CapacityError("grid oracle supports at most 3 modes");
    validate(spec);
    const std::size_t n = state.n();
    if (spec.modes != n) throw ContractViolation("grid mode count does not match the state");
    if (!state.graph_form)
        throw ContractViolation("grid synthesis requires the ideal layer in graph form");
    if (!(state.sigma2 > 0.0)) throw ContractViolation("sigma2 must be positive");

    // absolute-unit covariance blocks and the derived conditioning matrices
    Mat<double> suu(n, n), suv(n, n), svv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            suu(i, j) = state.cov(i, j) * state.sigma2;
            suv(i, j) = state.cov(i, n + j) * state.sigma2;
            svv(i, j) = state.cov(n + i, n + j) * state.sigma2;
        }
    const Mat<double> iuu = suu.inverse();
    const Mat<double> svu = suv.transposed();
    const Mat<double> bmat = svu * iuu;
    Mat<double> stilde = svv - bmat * suv;
    stilde.symmetrize();

    // per-vertex comb geometry (labels, X-flags) and CZ edge list
    std::vector<CombGeometry> combs(n);
    for (std::size_t i = 0; i < n; ++i) combs[i] = comb_geometry(state.labels[i], state.x_flag[i]);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (state.adjacency[i][j]) edges.emplace_back(i, j);

    // branch parameters in absolute units
    struct BranchAbs {
        std::complex<double> amp;
        std::array<double, 3> mu_u{}, mu_v{}, g_u{}, g_v{};
    };
    std::vector<BranchAbs> branches;
    double max_mu = 0.0;
    for (const auto& br : state.branches) {
        BranchAbs b;
        b.amp = br.amp;
        for (std::size_t i = 0; i < n; ++i) {
            b.mu_u[i] = kSqrtPi * br.mean[i];
            b.mu_v[i] = kSqrtPi * br.mean[n + i];
            b.g_u[i] = kSqrtPi * br.grad[i];
            b.g_v[i] = kSqrtPi * br.grad[n + i];
            max_mu = std::max(max_mu, std::fabs(b.mu_u[i]));
        }
        branches.push_back(b);
    }

    // tooth reach: Gershgorin bound on the largest eigenvalue of Sigma_uu
    double lam = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(suu(i, j));
        lam = std::max(lam, row);
    }
    const double reach = std::sqrt(2.0 * kTailExp * lam) + max_mu;
    std::array<long long, 3> kw{};
    for (std::size_t i = 0; i < n; ++i)
        kw[i] = static_cast<long long>(std::ceil(reach / combs[i].spacing)) + 1;

    GridWavefunction w;
    w.spec = spec;
    w.amp.assign(spec.size(), {0.0, 0.0});

    std::vector<std::size_t> multi(n, 0);
    std::array<double, 3> x{}, tooth{}, u{};
    std::array<long long, 3> kk{};
    for (std::size_t flat = 0; flat < w.amp.size(); ++flat) {
        for (std::size_t i = 0; i < n; ++i) x[i] = spec.coord(multi[i]);

        std::complex<double> point{0.0, 0.0};
        // iterate the tooth window of every mode (n <= 3)
        std::array<long long, 3> kc{};
        for (std::size_t i = 0; i < n; ++i)
            kc[i] = std::llround((x[i] - combs[i].offset) / combs[i].spacing);

        auto tooth_loop = [&](auto&& self, std::size_t mode) -> void {
            if (mode == n) {
                double sign = 1.0;
                double cz_phase = 0.0;
                double z_phase = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    tooth[i] = combs[i].offset + combs[i].spacing * static_cast<double>(kk[i]);
                    u[i] = x[i] - tooth[i];
                    if (combs[i].alternating && (kk[i] % 2 != 0)) sign = -sign;
                    if (state.z_flag[i]) z_phase += kSqrtPi * tooth[i];
                }
                for (const auto& [i, j] : edges) cz_phase -= tooth[i] * tooth[j];
                for (const auto& b : branches) {
                    double quad_u = 0.0;
                    std::array<double, 3> du{};
                    for (std::size_t i = 0; i < n; ++i) du[i] = u[i] - b.mu_u[i];
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j) quad_u += du[i] * iuu(i, j) * du[j];
                    if (quad_u > 4.0 * kTailExp) continue;
                    std::array<double, 3> kap{}, vbar{};
                    for (std::size_t i = 0; i < n; ++i) {
                        kap[i] = b.g_v[i] + 0.5 * (x[i] + tooth[i]);
                        vbar[i] = b.mu_v[i];
                        for (std::size_t j = 0; j < n; ++j) vbar[i] += bmat(i, j) * du[j];
                    }
                    double quad_k = 0.0;
                    double phase = cz_phase + z_phase;
                    for (std::size_t i = 0; i < n; ++i) {
                        phase += b.g_u[i] * u[i] + kap[i] * vbar[i];
                        for (std::size_t j = 0; j < n; ++j)
                            quad_k += kap[i] * stilde(i, j) * kap[j];
                    }
                    const double mag = -0.5 * (quad_u + quad_k);
                    if (mag < -2.0 * kTailExp) continue;
                    point += b.amp * sign * std::exp(mag) * std::polar(1.0, phase);
                }
                return;
            }
            for (kk[mode] = kc[mode] - kw[mode]; kk[mode] <= kc[mode] + kw[mode]; ++kk[mode])
                self(self, mode + 1);
        };
        tooth_loop(tooth_loop, 0);
        w.amp[flat] = point;

        for (std::size_t a = n; a-- > 0;) {
            if (++multi[a] < spec.points) break;
            multi[a] = 0;
        }
    }
    normalize(w);
    return w;
}

void evolve_cz(GridWavefunction& w, std::size_t i, std::size_t j, int sign) {
    if (i == j || i >= w.spec.modes || j >= w.spec.modes)
        throw ContractViolation("cz needs two distinct in-range modes");
    const AxisView vi = axis_view(w.spec, i);
    const AxisView vj = axis_view(w.spec, j);
    const double s = sign >= 0 ? 1.0 : -1.0;
    for (std::size_t flat = 0; flat < w.amp.size(); ++flat) {
        const double xi = w.spec.coord((flat / vi.stride) % w.spec.points);
        const double xj = w.spec.coord((flat / vj.stride) % w.spec.points);
        w.amp[flat] *= std::polar(1.0, -s * xi * xj);
    }
}

void evolve_cx(GridWavefunction& w, std::size_t control, std::size_t target, double gain) {
    if (control == target || control >= w.spec.modes || target >= w.spec.modes)
        throw ContractViolation("cx needs two distinct in-range modes");
    const AxisView vt = axis_view(w.spec, target);
    const AxisView vc = axis_view(w.spec, control);
    const std::size_t m = w.spec.points;
    const double dx = w.spec.dx();
    double measure = 1.0;
    for (std::size_t a = 0; a < w.spec.modes; ++a) measure *= dx;

    std::vector<std::complex<double>> out(w.amp.size(), {0.0, 0.0});
    std::vector<std::complex<double>> buf;
    double dropped = 0.0;
    for (std::size_t line = 0; line < vt.lines; ++line) {
        const std::size_t base = line_base(vt, line);
        const std::size_t cidx = (base / vc.stride) % m;
        const double shift_real = gain * w.spec.coord(cidx) / dx;
        gather_line(w, vt, line, buf);
        const double rounded = std::round(shift_real);
        if (std::fabs(shift_real - rounded) < 1e-9) {
            const long long s = static_cast<long long>(rounded);
            for (std::size_t t = 0; t < m; ++t) {
                const long long dest = static_cast<long long>(t) + s;
                if (dest < 0 || dest >= static_cast<long long>(m)) {
                    dropped += std::norm(buf[t]);
                    continue;
                }
                out[base + static_cast<std::size_t>(dest) * vt.stride] = buf[t];
            }
        } else {
            // linear interpolation: destination t reads from t - shift
            for (std::size_t t = 0; t < m; ++t) {
                const double src = static_cast<double>(t) - shift_real;
                const double fl = std::floor(src);
                const long long j0 = static_cast<long long>(fl);
                const double frac = src - fl;
                std::complex<double> v{0.0, 0.0};
                if (j0 >= 0 && j0 < static_cast<long long>(m)) v += (1.0 - frac) * buf[j0];
                if (j0 + 1 >= 0 && j0 + 1 < static_cast<long long>(m)) v += frac * buf[j0 + 1];
                out[base + t * vt.stride] = v;
            }
            for (std::size_t t = 0; t < m; ++t) {
                const double dest = static_cast<double>(t) + shift_real;
                if (dest < 0.0 || dest > static_cast<double>(m - 1)) dropped += std::norm(buf[t]);
            }
        }
    }
    if (dropped * measure > kAliasTol)
        throw AliasingError("cx shear pushed significant amplitude off the grid");
    w.amp = std::move(out);
}

void evolve_fourier(GridWavefunction& w, std::size_t mode, int sign) {
    require_self_dual(w.spec, "fourier");
    const AxisView v = axis_view(w.spec, mode);
    const double dx = w.spec.dx();
    std::vector<std::complex<double>> buf;
    for (std::size_t line = 0; line < v.lines; ++line) {
        gather_line(w, v, line, buf);
        fft::centered_ft(buf, dx, sign >= 0 ? +1 : -1);
        scatter_line(w, v, line, buf);
    }
}

void evolve_displacement(GridWavefunction& w, std::size_t mode, double du, double dv) {
    const AxisView v = axis_view(w.spec, mode);
    const double dx = w.spec.dx();
    const std::size_t m = w.spec.points;
    double measure = 1.0;
    for (std::size_t a = 0; a < w.spec.modes; ++a) measure *= dx;

    // position shift psi(x) -> psi(x - du)
    const double steps = du / dx;
    const double rounded = std::round(steps);
    std::vector<std::complex<double>> buf;
    if (std::fabs(steps - rounded) < 1e-9) {
        const long long s = static_cast<long long>(rounded);
        if (s != 0) {
            double dropped = 0.0;
            for (std::size_t line = 0; line < v.lines; ++line) {
                gather_line(w, v, line, buf);
                std::vector<std::complex<double>> out(m, {0.0, 0.0});
                for (std::size_t t = 0; t < m; ++t) {
                    const long long dest = static_cast<long long>(t) + s;
                    if (dest < 0 || dest >= static_cast<long long>(m)) {
                        dropped += std::norm(buf[t]);
                        continue;
                    }
                    out[static_cast<std::size_t>(dest)] = buf[t];
                }
                scatter_line(w, v, line, out);
            }
            if (dropped * measure > kAliasTol)
                throw AliasingError("displacement pushed significant amplitude off the grid");
        }
    } else {
        for (std::size_t line = 0; line < v.lines; ++line) {
            gather_line(w, v, line, buf);
            fourier_translate_line(buf, dx, du);
            scatter_line(w, v, line, buf);
        }
    }

    // momentum kick e^{i dv x} and the Weyl ordering phase e^{-i du dv / 2}
    const std::complex<double> weyl = std::polar(1.0, -0.5 * du * dv);
    for (std::size_t flat = 0; flat < w.amp.size(); ++flat) {
        const double xm = w.spec.coord((flat / v.stride) % m);
        w.amp[flat] *= weyl * std::polar(1.0, dv * xm);
    }
}

void evolve_beamsplitter(GridWavefunction& w, std::size_t i, std::size_t j) {
    if (i == j || i >= w.spec.modes || j >= w.spec.modes)
        throw ContractViolation("beamsplitter needs two distinct in-range modes");
    // support map (x_i, x_j) -> ((x_i + x_j)/sqrt2, (x_j - x_i)/sqrt2): a
    // rotation by theta = -pi/4, decomposed into three Fourier shears
    const double theta = -0.25 * kPi;
    const double a = -std::tan(0.5 * theta);
    const double b = std::sin(theta);
    shear(w, i, j, a);
    shear(w, j, i, b);
    shear(w, i, j, a);
}

SliceResult slice_homodyne(const GridWavefunction& w, std::size_t mode, states::Quadrature quad,
                           double y) {
    if (w.spec.modes < 2)
        throw ContractViolation("slice_homodyne needs at least two modes");
    if (mode >= w.spec.modes) throw ContractViolation("slice mode out of range");

    GridWavefunction work = w;
    if (quad == states::Quadrature::P) evolve_fourier(work, mode, +1);

    const std::size_t m = work.spec.points;
    const double dx = work.spec.dx();
    const double g = y / dx + static_cast<double>(m) / 2.0;
    if (g < -1e-9 || g > static_cast<double>(m - 1) + 1e-9)
        throw ContractViolation("slice outcome lies outside the grid");
    const double gc = std::clamp(g, 0.0, static_cast<double>(m - 1));
    const std::size_t j0 = static_cast<std::size_t>(std::floor(gc));
    const std::size_t j1 = std::min(j0 + 1, m - 1);
    const double frac = gc - std::floor(gc);

    const AxisView v = axis_view(work.spec, mode);
    SliceResult res;
    res.remainder.spec = work.spec;
    res.remainder.spec.modes = work.spec.modes - 1;
    res.remainder.amp.assign(res.remainder.spec.size(), {0.0, 0.0});

    double density = 0.0;
    for (std::size_t line = 0; line < v.lines; ++line) {
        const std::size_t base = line_base(v, line);
        const std::complex<double> val = (1.0 - frac) * work.amp[base + j0 * v.stride] +
                                         frac * work.amp[base + j1 * v.stride];
        res.remainder.amp[line] = val;
        density += std::norm(val);
    }
    double rest_measure = 1.0;
    for (std::size_t a = 0; a + 1 < work.spec.modes; ++a) rest_measure *= dx;
    res.density = density * rest_measure;
    if (!(density > 1e-300))
        throw DegenerateConditioning("homodyne slice has vanishing amplitude");
    normalize(res.remainder);
    return res;
}

std::complex<double> overlap(const GridWavefunction& a, const GridWavefunction& b) {
    if (!(a.spec == b.spec)) throw ContractViolation("overlap requires identical grid specs");
    std::complex<double> s{0.0, 0.0};
    for (std::size_t k = 0; k < a.amp.size(); ++k) s += std::conj(a.amp[k]) * b.amp[k];
    double measure = 1.0;
    for (std::size_t m = 0; m < a.spec.modes; ++m) measure *= a.spec.dx();
    return s * measure;
}

std::vector<std::pair<double, double>> density_profile(const GridWavefunction& w,
                                                       std::size_t mode) {
    const AxisView v = axis_view(w.spec, mode);
    const double dx = w.spec.dx();
    double rest_measure = 1.0;
    for (std::size_t a = 0; a + 1 < w.spec.modes; ++a) rest_measure *= dx;
    std::vector<std::pair<double, double>> rows(w.spec.points);
    for (std::size_t k = 0; k < w.spec.points; ++k) rows[k] = {w.spec.coord(k), 0.0};
    for (std::size_t line = 0; line < v.lines; ++line) {
        const std::size_t base = line_base(v, line);
        for (std::size_t k = 0; k < w.spec.points; ++k)
            rows[k].second += std::norm(w.amp[base + k * v.stride]) * rest_measure;
    }
    return rows;
}

}  // namespace gkp::oracle
