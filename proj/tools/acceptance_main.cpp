// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Each criterion is self-timed against its stated budget.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "psel/sweep.hpp"
#include "psel/validate.hpp"

namespace {

using namespace psel;

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

std::vector<double> column(const SweepTable& t, const std::string& name) {
    size_t idx = t.columns.size();
    for (size_t c = 0; c < t.columns.size(); ++c)
        if (t.columns[c] == name) idx = c;
    if (idx == t.columns.size()) throw ConfigError("missing column: " + name);
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) out.push_back(std::strtod(row[idx].c_str(), nullptr));
    return out;
}

const SweepTable& curve(const std::vector<NamedTable>& curves, const std::string& name) {
    for (const auto& c : curves)
        if (c.name == name) return c.table;
    throw ConfigError("missing curve: " + name);
}

int count_local_maxima(const std::vector<double>& v, double prominence) {
    int n = 0;
    for (size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] > v[i - 1] + prominence && v[i] > v[i + 1] + prominence) ++n;
    return n;
}

bool nonincreasing(const std::vector<double>& v, double slack) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + slack) return false;
    return true;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::string fmt(double v) { return format_g17(v); }

// 1. Convention calibration: residual and cross-probe stability gates, unique
// phase multiplicity. The probe set spans n_bar in {0, 0.5, 2} and r in
// {0, 0.5, 1.2}.
bool crit_calibration(std::string& detail) {
    const CalibrationReport rep = calibrate_convention();
    const bool ok = rep.max_fit_residual < 1e-8 && rep.kappa_spread < 1e-6 &&
                    rep.kappa_tilde_spread < 1e-6 && (rep.m == 1 || rep.m == 2);
    detail = "kappa=" + fmt(rep.kappa) + " kappa_tilde=" + fmt(rep.kappa_tilde) +
             " m=" + std::to_string(rep.m) + " residual=" + fmt(rep.max_fit_residual) +
             " spread=" + fmt(std::max(rep.kappa_spread, rep.kappa_tilde_spread));
    return ok;
}

// 2. Closed forms vs brute force on 200 randomized feasible setups.
bool crit_oracle_equivalence(std::string& detail) {
    const ValidationReport rep = run_validation(200, 20260822ULL);
    detail = "max_absdiff: p_succ=" + fmt(rep.dev_p_succ.max_abs) +
             " overlap=" + fmt(rep.dev_overlap.max_abs) +
             " delta_x=" + fmt(rep.dev_delta_x.max_abs) +
             " delta_p=" + fmt(rep.dev_delta_p.max_abs);
    return rep.pass;
}

// 3. Closed rational weak value vs direct Kraus-algebra weak value on a
// five-axis grid (both polar angles, both azimuths, gamma), p held fixed.
bool crit_dual_weak_value(std::string& detail) {
    const Observable obs = sigma_z();
    double worst = 0.0;
    long compared = 0, skipped = 0;
    for (int i1 = 0; i1 < 11; ++i1)
        for (int i2 = 0; i2 < 11; ++i2)
            for (int j1 = 0; j1 < 5; ++j1)
                for (int j2 = 0; j2 < 5; ++j2)
                    for (int g = 0; g < 8; ++g) {
                        const QubitState pre(0.15 + (pi - 0.3) * i1 / 10.0, 2.0 * pi * j1 / 5.0);
                        const QubitState post(0.15 + (pi - 0.3) * i2 / 10.0,
                                              0.37 + 2.0 * pi * j2 / 5.0);
                        const GadChannel ch(g / 7.0, 0.3);
                        try {
                            const auto ks = kraus_ops(ch);
                            const cplx a = weak_value_gad(pre, post, ch);
                            const cplx b = weak_value_general(pre, post,
                                                              {ks.begin(), ks.end()}, obs);
                            // anomalous points amplify shared roundoff with the
                            // weak value itself, so agreement is gauged against
                            // the magnitude once it exceeds unity
                            worst = std::max(worst,
                                             std::abs(a - b) / std::max(1.0, std::abs(a)));
                            ++compared;
                        } catch (const OrthogonalSelection&) {
                            ++skipped;
                        }
                    }
    detail = "points=" + std::to_string(compared) + " skipped=" + std::to_string(skipped) +
             " max_dev=" + fmt(worst);
    return compared >= 10000 && worst < 1e-12;
}

// 4. Limit theorems.
bool crit_limits(std::string& detail) {
    bool ok = true;
    std::ostringstream oss;

    // (a) s->0: amp_x -> Re(WV) and amp_p -> Gamma Im(WV) with at least
    // first-order convergence; printed constants make the momentum constant
    // exactly Gamma, calibrated ones exactly kappa*Gamma.
    {
        // pointers here keep the squeeze axis on a quadrature (chi in {0, pi/2})
        // so the X-P covariance vanishes and Re(WV) is the exact position limit;
        // tilted-squeeze limits are covered by the unit suite
        const double params[5][10] = {
            {0.6 * pi, 0.3, 0.25 * pi, 1.9, 0.35, 0.2, 0.5, 0.4, 0.0, 0.7},
            {0.3 * pi, 1.1, 0.7 * pi, 0.4, 0.6, 0.1, 0.0, 0.0, 0.0, 1.1},
            {0.45 * pi, 2.2, 0.35 * pi, 5.1, 0.15, 0.45, 1.0, 0.3, 0.5 * pi, -0.6},
            {0.8 * pi, 0.9, 0.55 * pi, 2.6, 0.5, 0.3, 0.2, 0.8, 0.5 * pi, 0.9},
            {0.25 * pi, 4.0, 0.6 * pi, 0.2, 0.05, 0.0, 1.5, 0.2, 0.0, -1.0}};
        double worst_ratio = 0.0;
        for (const auto& q : params) {
            const QubitState pre(q[0], q[1]), post(q[2], q[3]);
            const GadChannel ch(q[4], q[5]);
            const PointerState pt(1.0, q[6], q[7], q[8], 0.0, q[9]);
            const cplx wv = weak_value_gad(pre, post, ch);
            const double g_big = rate_gamma(pt);
            for (const Convention& conv :
                 {Convention::paper_printed(), Convention::calibrated()}) {
                const double px = wv.real();
                const double pp = conv.kappa * g_big * wv.imag();
                double ex_prev = 0.0, ep_prev = 0.0;
                for (int k = 0; k < 3; ++k) {
                    const double s = std::pow(10.0, -2 - k);
                    const MeasurementSetup su(pre, post, ch, pt, s);
                    const double ex = std::abs(amp_x(su, conv) - px);
                    const double ep = std::abs(amp_p(su, conv) - pp);
                    if (k > 0) {
                        // one decade in s must shrink the error by at least ~3x
                        ok = ok && ex <= 0.34 * ex_prev + 1e-12;
                        ok = ok && ep <= 0.34 * ep_prev + 1e-12;
                        if (ex_prev > 1e-10) worst_ratio = std::max(worst_ratio, ex / ex_prev);
                        if (ep_prev > 1e-10) worst_ratio = std::max(worst_ratio, ep / ep_prev);
                    }
                    ex_prev = ex;
                    ep_prev = ep;
                }
            }
        }
        oss << "a:ratio=" << fmt(worst_ratio);
    }

    // (b) strong limit at kappa*Gamma*s^2 > 40.
    {
        const Convention conv = Convention::calibrated();
        const PointerState pt(1.0, 0.5, 0.0, 0.0, 0.0, 0.4);
        const double s = 6.5; // kappa*Gamma*s^2 = 42.25
        double worst_x = 0.0, worst_p = 0.0;
        for (int i = 1; i <= 9; ++i)
            for (int j = 1; j <= 9; ++j)
                for (double gamma : {0.0, 0.3, 0.7, 1.0})
                    for (double p : {0.0, 0.25, 0.5}) {
                        const MeasurementSetup su(QubitState(0.1 * pi * i, 0.4),
                                                  QubitState(0.1 * pi * j, 1.7),
                                                  GadChannel(gamma, p), pt, s);
                        if (p_succ(su, conv) < anomalous_threshold) continue;
                        worst_x = std::max(worst_x, std::abs(amp_x(su, conv)));
                        worst_p = std::max(worst_p, std::abs(amp_p(su, conv)));
                    }
        ok = ok && worst_x <= 1.0 + 1e-9 && worst_p < 1e-12;
        oss << " b:max_amp_x=" << fmt(worst_x) << " max_amp_p=" << fmt(worst_p);
    }

    // (c) overlap at s=0 equals the initial purity normalization 1/(2n_bar+1).
    {
        DetRng rng(404ULL);
        double worst = 0.0;
        int evaluated = 0;
        for (int i = 0; i < 100; ++i) {
            const QubitState pre(rng.uniform(0.0, pi), rng.uniform(0.0, 2.0 * pi));
            const QubitState post(rng.uniform(0.0, pi), rng.uniform(0.0, 2.0 * pi));
            const GadChannel ch(rng.uniform(0.0, 1.0), rng.uniform(0.0, 0.5));
            const PointerState pt(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0),
                                  rng.uniform(0.0, 1.2), rng.uniform(0.0, pi),
                                  rng.uniform(-1.25, 1.25), rng.uniform(-1.25, 1.25));
            const MeasurementSetup su(pre, post, ch, pt, 0.0);
            if (p_succ(su) < anomalous_threshold) continue;
            ++evaluated;
            for (const Convention& conv :
                 {Convention::paper_printed(), Convention::calibrated()})
                worst = std::max(worst,
                                 std::abs(overlap(su, conv) - 1.0 / (2.0 * pt.n_bar + 1.0)));
        }
        ok = ok && evaluated >= 80 && worst < 1e-12;
        oss << " c:n=" << evaluated << " err=" << fmt(worst);
    }

    // (d) gamma=0 reduces the channel-dressed weak value to the bare one.
    {
        const Observable obs = sigma_z();
        double worst = 0.0;
        long compared = 0;
        for (int i1 = 0; i1 < 11; ++i1)
            for (int i2 = 0; i2 < 11; ++i2)
                for (int j1 = 0; j1 < 7; ++j1)
                    for (int j2 = 0; j2 < 7; ++j2) {
                        const QubitState pre(0.15 + (pi - 0.3) * i1 / 10.0, 2.0 * pi * j1 / 7.0);
                        const QubitState post(0.15 + (pi - 0.3) * i2 / 10.0,
                                              0.29 + 2.0 * pi * j2 / 7.0);
                        try {
                            const cplx a = weak_value_gad(pre, post, GadChannel(0.0, 0.31));
                            const cplx b = aav_weak_value(pre, post, obs);
                            // near-orthogonal selections inflate the value and
                            // its roundoff together; gauge against the magnitude
                            // once it exceeds unity
                            worst = std::max(worst,
                                             std::abs(a - b) / std::max(1.0, std::abs(a)));
                            ++compared;
                        } catch (const OrthogonalSelection&) {
                        }
                    }
        ok = ok && compared >= 5000 && worst < 1e-12;
        oss << " d:points=" << compared << " max_dev=" << fmt(worst);
    }

    detail = oss.str();
    return ok;
}

// 5. Branch-weight normalization: w_pp + w_mm + 2 Re(w_pm e^{-2ibs}) e^{-kGs^2} = 1.
bool crit_weights(std::string& detail) {
    const Convention conv = Convention::calibrated();
    DetRng rng(505ULL);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const MeasurementSetup su = sample_feasible_setup(rng);
        const BranchWeights w = branch_weights(su, conv);
        const double env = std::exp(-conv.kappa * rate_gamma(su.pointer) * su.s * su.s);
        const cplx phase = std::exp(cplx(0.0, -2.0 * su.pointer.b * su.s));
        const double total = w.w_pp + w.w_mm + 2.0 * (w.w_pm * phase).real() * env;
        worst = std::max(worst, std::abs(total - 1.0));
    }
    detail = "setups=200 max_absdev=" + fmt(worst);
    return worst < 1e-10;
}

// 6. Figure-property suite over the emitted preset tables (printed constants).
bool crit_figures(std::string& detail) {
    bool ok = true;
    std::ostringstream oss;

    {
        const auto c2 = figure_curves("fig2");
        const double s0 = max_abs(column(curve(c2, "fig2_south_p0.00"), "wv_re"));
        const double s25 = max_abs(column(curve(c2, "fig2_south_p0.25"), "wv_re"));
        const double s50 = max_abs(column(curve(c2, "fig2_south_p0.50"), "wv_re"));
        const double n0 = max_abs(column(curve(c2, "fig2_north_p0.00"), "wv_re"));
        const double n25 = max_abs(column(curve(c2, "fig2_north_p0.25"), "wv_re"));
        const double n50 = max_abs(column(curve(c2, "fig2_north_p0.50"), "wv_re"));
        const bool f2 = s0 > s25 && s25 > s50 && n50 > n25 && n25 > n0 && s0 > 1.0 && n50 > 1.0;
        ok = ok && f2;
        oss << "fig2:" << (f2 ? "ok" : "FAIL") << " south(" << fmt(s0) << ">" << fmt(s25) << ">"
            << fmt(s50) << ") north(" << fmt(n50) << ">" << fmt(n25) << ">" << fmt(n0) << ")";
    }

    {
        const auto c3 = figure_curves("fig3");
        const SweepTable& ta = curve(c3, "fig3_a_p0.00");
        const std::vector<double> th = column(ta, "axis1");
        const std::vector<double> ps = column(ta, "p_succ");
        size_t imin = 0;
        for (size_t i = 1; i < ps.size(); ++i)
            if (ps[i] < ps[imin]) imin = i;
        const bool dip = ps[imin] < 0.01 && std::abs(th[imin] - 0.25 * pi) < 0.15;
        int fringes_min = 1000;
        for (const char* name : {"fig3_b_p0.00", "fig3_b_p0.25", "fig3_b_p0.50"})
            fringes_min =
                std::min(fringes_min, count_local_maxima(column(curve(c3, name), "p_succ"), 1e-9));
        const bool f3 = dip && fringes_min >= 2;
        ok = ok && f3;
        oss << " fig3:" << (f3 ? "ok" : "FAIL") << " min_p=" << fmt(ps[imin])
            << " at_theta=" << fmt(th[imin]) << " fringes>=" << fringes_min;
    }

    {
        const auto c4 = figure_curves("fig4");
        bool mono = true;
        int revivals = 0;
        for (const char* name : {"fig4_a_p0.00", "fig4_a_p0.25", "fig4_a_p0.50"})
            mono = mono && nonincreasing(column(curve(c4, name), "overlap"), 1e-12);
        // the interference amplitude is fixed while the background grows with p,
        // so the fringes are a panel property: prominent at p=0, gone by p=1/2
        for (const char* name : {"fig4_b_p0.00", "fig4_b_p0.25", "fig4_b_p0.50"})
            revivals =
                std::max(revivals, count_local_maxima(column(curve(c4, name), "overlap"), 1e-9));
        const bool f4 = mono && revivals >= 1;
        ok = ok && f4;
        oss << " fig4:" << (f4 ? "ok" : "FAIL") << " monotone=" << (mono ? "yes" : "no")
            << " revivals=" << revivals;
    }

    {
        const auto c5 = figure_curves("fig5");
        const std::vector<double> o0 = column(curve(c5, "fig5_chi0.00pi"), "overlap");
        const std::vector<double> o2 = column(curve(c5, "fig5_chi0.50pi"), "overlap");
        bool dominates = o0.size() == o2.size();
        double gap = 0.0;
        for (size_t i = 0; dominates && i < o0.size(); ++i) {
            dominates = o0[i] >= o2[i] - 1e-12;
            gap = std::max(gap, o0[i] - o2[i]);
        }
        const bool f5 = dominates && gap > 1e-3;
        ok = ok && f5;
        oss << " fig5:" << (f5 ? "ok" : "FAIL") << " max_gap=" << fmt(gap);
    }

    {
        const auto c6 = figure_curves("fig6");
        double weak_min = 1e300, strong_max_x = 0.0, strong_max_p = 0.0;
        for (const char* name : {"fig6_a_p0.00", "fig6_a_p0.25", "fig6_a_p0.50"})
            weak_min = std::min(weak_min, max_abs(column(curve(c6, name), "amp_x")));
        for (const char* name : {"fig6_b_p0.00", "fig6_b_p0.25", "fig6_b_p0.50"}) {
            strong_max_x = std::max(strong_max_x, max_abs(column(curve(c6, name), "amp_x")));
            strong_max_p = std::max(strong_max_p, max_abs(column(curve(c6, name), "amp_p")));
        }
        const bool f6 = weak_min > 1.0 + 1e-6 && strong_max_x <= 1.0 + 1e-9 &&
                        strong_max_p < 1e-12;
        ok = ok && f6;
        oss << " fig6:" << (f6 ? "ok" : "FAIL") << " weak_min_max|amp_x|=" << fmt(weak_min)
            << " strong_max|amp_x|=" << fmt(strong_max_x);
    }

    detail = oss.str();
    return ok;
}

// 7. Channel algebra: completeness, trace preservation, Choi positivity,
// Heisenberg duality, full-damping fixed point.
bool crit_channel(std::string& detail) {
    DetRng rng(707ULL);
    auto random_density = [&rng]() {
        Mat2 g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                g(i, j) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        Mat2 rho = g * g.adjoint();
        return Mat2(rho / rho.trace());
    };
    auto random_hermitian = [&rng]() {
        Mat2 g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                g(i, j) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        return Mat2(0.5 * (g + g.adjoint()));
    };

    double w_comp = 0.0, w_trace = 0.0, w_choi = 0.0, w_dual = 0.0, w_fixed = 0.0;
    for (int ig = 0; ig <= 10; ++ig)
        for (int ip = 0; ip <= 5; ++ip) {
            const GadChannel ch(ig / 10.0, ip / 10.0);
            const auto ks = kraus_ops(ch);

            Mat2 comp = Mat2::Zero();
            for (const auto& k : ks) comp += k.adjoint() * k;
            w_comp = std::max(w_comp, (comp - Mat2::Identity()).cwiseAbs().maxCoeff());

            // Choi matrix via column-stacked vec(K) outer products
            Eigen::Matrix<cplx, 4, 4> choi = Eigen::Matrix<cplx, 4, 4>::Zero();
            for (const auto& k : ks) {
                Eigen::Vector<cplx, 4> v;
                v << k(0, 0), k(1, 0), k(0, 1), k(1, 1);
                choi += v * v.adjoint();
            }
            const auto evs = Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, 4, 4>>(choi)
                                 .eigenvalues();
            w_choi = std::max(w_choi, std::max(0.0, -evs.minCoeff()));

            for (int t = 0; t < 5; ++t) {
                const Mat2 rho = random_density();
                const Mat2 out = psel::apply(ch, rho);
                w_trace = std::max(w_trace, std::abs(out.trace() - cplx(1.0, 0.0)));
                const Mat2 x = random_hermitian();
                const cplx lhs = (x * out).trace();
                const cplx rhs = (adjoint_apply(ch, x) * rho).trace();
                w_dual = std::max(w_dual, std::abs(lhs - rhs));
                if (ig == 10) {
                    Mat2 fixed = Mat2::Zero();
                    fixed(basis_index_one, basis_index_one) = ch.p;
                    fixed(basis_index_zero, basis_index_zero) = 1.0 - ch.p;
                    w_fixed = std::max(w_fixed, (out - fixed).cwiseAbs().maxCoeff());
                }
            }
        }
    detail = "completeness=" + fmt(w_comp) + " trace=" + fmt(w_trace) + " choi_neg=" +
             fmt(w_choi) + " duality=" + fmt(w_dual) + " fixed_point=" + fmt(w_fixed);
    return w_comp < 1e-12 && w_trace < 1e-12 && w_choi < 1e-10 && w_dual < 1e-12 &&
           w_fixed < 1e-12;
}

// 8. Determinism: identical bytes across repetition and thread counts for
// sweeps (both engines) and for the seeded validation report.
bool crit_determinism(std::string& detail) {
    const MeasurementSetup base(QubitState(0.6 * pi, 0.4), QubitState(0.3 * pi, 2.2),
                                GadChannel(0.35, 0.2), PointerState(1.1, 0.3, 0.2, 0.5, 0.1, 0.6),
                                0.5);
    SweepSpec spec;
    spec.axis1 = AxisRange{"s", 0.0, 2.0, 41};
    spec.axis2 = AxisRange{"theta_f", 0.1, 3.0, 21};
    spec.outputs = {"p_succ", "overlap", "amp_x", "amp_p", "wv_re", "wv_im", "delta_x", "delta_p"};
    const std::string a1 = run_sweep(base, spec, Engine::analytic, Convention::calibrated(), 1).to_csv();
    const std::string a2 = run_sweep(base, spec, Engine::analytic, Convention::calibrated(), 4).to_csv();
    const std::string a3 = run_sweep(base, spec, Engine::analytic, Convention::calibrated(), 4).to_csv();

    SweepSpec ospec;
    ospec.axis1 = AxisRange{"s", 0.2, 1.0, 3};
    ospec.axis2 = AxisRange{"gamma", 0.0, 0.8, 3};
    ospec.outputs = {"p_succ", "overlap", "delta_x", "delta_p"};
    const std::string b1 = run_sweep(base, ospec, Engine::both, Convention::calibrated(), 1).to_csv();
    const std::string b2 = run_sweep(base, ospec, Engine::both, Convention::calibrated(), 3).to_csv();

    auto report_string = [](const ValidationReport& r) {
        std::string s;
        for (double v : {r.calibration.kappa, r.calibration.kappa_tilde,
                         double(r.calibration.m), r.dev_p_succ.max_abs, r.dev_overlap.max_abs,
                         r.dev_delta_x.max_abs, r.dev_delta_p.max_abs, double(r.dev_p_succ.argmax),
                         double(r.dev_overlap.argmax), double(r.dev_delta_x.argmax),
                         double(r.dev_delta_p.argmax)})
            s += format_g17(v) + "\n";
        return s;
    };
    const std::string v1 = report_string(run_validation(25, 11ULL, 1));
    const std::string v2 = report_string(run_validation(25, 11ULL, 6));

    const bool ok = a1 == a2 && a2 == a3 && b1 == b2 && v1 == v2;
    detail = std::string("analytic_sweep=") + (a1 == a2 && a2 == a3 ? "stable" : "UNSTABLE") +
             " both_sweep=" + (b1 == b2 ? "stable" : "UNSTABLE") +
             " validate=" + (v1 == v2 ? "stable" : "UNSTABLE");
    return ok;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"convention calibration", 30.0, crit_calibration},
        {"oracle equivalence (200 setups)", 180.0, crit_oracle_equivalence},
        {"dual weak-value paths", 10.0, crit_dual_weak_value},
        {"limit theorems", 60.0, crit_limits},
        {"branch-weight normalization", 60.0, crit_weights},
        {"figure-property suite", 60.0, crit_figures},
        {"channel algebra suite", 60.0, crit_channel},
        {"determinism", 120.0, crit_determinism},
    };

    bool all_ok = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > criteria[i].budget_seconds) {
            ok = false;
            detail += " [over budget " + std::to_string(criteria[i].budget_seconds) + "s]";
        }
        char line[96];
        std::snprintf(line, sizeof(line), "[%s] %zu %s (%.1fs) ", ok ? "PASS" : "FAIL", i + 1,
                      criteria[i].name.c_str(), dt);
        std::cout << line << detail << "\n" << std::flush;
        all_ok = all_ok && ok;
    }
    std::cout << (all_ok ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES present")
              << "\n";
    return all_ok ? 0 : 1;
}
