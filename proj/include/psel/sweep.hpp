#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "psel/config.hpp"
#include "psel/oracle.hpp"

namespace psel {

enum class Engine { analytic, oracle, both };

inline Engine engine_from_string(const std::string& s) {
    if (s == "analytic") return Engine::analytic;
    if (s == "oracle") return Engine::oracle;
    if (s == "both") return Engine::both;
    throw ConfigError("unknown engine: " + s + " (expected analytic|oracle|both)");
}

inline const std::vector<std::string>& axis_vocabulary() {
    static const std::vector<std::string> names = {"s", "theta_f", "theta_i", "p",    "gamma",
                                                   "b", "r",       "chi",     "n_bar"};
    return names;
}

inline const std::vector<std::string>& output_vocabulary() {
    static const std::vector<std::string> names = {"p_succ", "overlap", "amp_x",   "amp_p",
                                                   "wv_re",  "wv_im",   "delta_x", "delta_p"};
    return names;
}

// Oracle-reachable subset: the weak value is an analytic construct with no
// brute-force counterpart, so it carries no difference column.
inline bool output_has_oracle(const std::string& name) {
    return name != "wv_re" && name != "wv_im";
}

struct AxisRange {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    double value_at(int i) const {
        if (count == 1) return start;
        return start + (stop - start) * double(i) / double(count - 1);
    }
};

struct SweepSpec {
    AxisRange axis1;
    std::optional<AxisRange> axis2;
    std::vector<std::string> outputs;
};

inline void apply_axis(MeasurementSetup& su, const std::string& axis, double v) {
    if (axis == "s")
        su.s = v;
    else if (axis == "theta_f")
        su.post = QubitState(v, su.post.phi);
    else if (axis == "theta_i")
        su.pre = QubitState(v, su.pre.phi);
    else if (axis == "p")
        su.channel = GadChannel(su.channel.gamma, v);
    else if (axis == "gamma")
        su.channel = GadChannel(v, su.channel.p);
    else if (axis == "b")
        su.pointer = PointerState(su.pointer.sigma, su.pointer.n_bar, su.pointer.r, su.pointer.chi,
                                  su.pointer.a, v);
    else if (axis == "r")
        su.pointer = PointerState(su.pointer.sigma, su.pointer.n_bar, v, su.pointer.chi,
                                  su.pointer.a, su.pointer.b);
    else if (axis == "chi")
        su.pointer = PointerState(su.pointer.sigma, su.pointer.n_bar, su.pointer.r, v,
                                  su.pointer.a, su.pointer.b);
    else if (axis == "n_bar")
        su.pointer = PointerState(su.pointer.sigma, v, su.pointer.r, su.pointer.chi, su.pointer.a,
                                  su.pointer.b);
    else
        throw ConfigError("unknown sweep axis: " + axis);
}

inline void validate_axis_range(const MeasurementSetup& base, const AxisRange& ax) {
    bool known = false;
    for (const auto& n : axis_vocabulary()) known = known || n == ax.name;
    if (!known) throw ConfigError("unknown sweep axis: " + ax.name);
    if (ax.count < 2) throw ConfigError("sweep count must be >= 2 for axis " + ax.name);
    if (!std::isfinite(ax.start) || !std::isfinite(ax.stop))
        throw ConfigError("sweep range must be finite for axis " + ax.name);
    MeasurementSetup probe = base;
    try {
        apply_axis(probe, ax.name, ax.start);
        apply_axis(probe, ax.name, ax.stop);
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("sweep range leaves valid domain: ") + e.what());
    }
}

inline SweepSpec sweep_from_config(const ConfigMap& cfg, const MeasurementSetup& base) {
    SweepSpec spec;
    if (!cfg.count("sweep.axis")) throw ConfigError("missing sweep.axis");
    spec.axis1.name = cfg.at("sweep.axis");
    spec.axis1.start = cfg_number(cfg, "sweep.start", 0.0);
    spec.axis1.stop = cfg_number(cfg, "sweep.stop", 0.0);
    spec.axis1.count = int(cfg_number(cfg, "sweep.count", 0.0));
    validate_axis_range(base, spec.axis1);
    if (cfg.count("sweep.axis2")) {
        AxisRange ax2;
        ax2.name = cfg.at("sweep.axis2");
        ax2.start = cfg_number(cfg, "sweep.start2", 0.0);
        ax2.stop = cfg_number(cfg, "sweep.stop2", 0.0);
        ax2.count = int(cfg_number(cfg, "sweep.count2", 0.0));
        validate_axis_range(base, ax2);
        spec.axis2 = ax2;
    }
    const std::string raw = cfg_string(cfg, "sweep.outputs", "");
    if (raw.empty()) {
        spec.outputs = output_vocabulary();
    } else {
        std::string item;
        std::istringstream in(raw);
        while (std::getline(in, item, ',')) {
            item = trim(item);
            bool known = false;
            for (const auto& n : output_vocabulary()) known = known || n == item;
            if (!known) throw ConfigError("unknown output quantity: " + item);
            spec.outputs.push_back(item);
        }
        if (spec.outputs.empty()) throw ConfigError("sweep.outputs is empty");
    }
    return spec;
}

struct SweepTable {
    std::string axis1_name;
    std::string axis2_name; // "none" for one-dimensional sweeps
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::string out = "# axis1=" + axis1_name + " axis2=" + axis2_name + "\n";
        for (size_t c = 0; c < columns.size(); ++c) {
            out += columns[c];
            out += (c + 1 == columns.size()) ? '\n' : ',';
        }
        for (const auto& row : rows)
            for (size_t c = 0; c < row.size(); ++c) {
                out += row[c];
                out += (c + 1 == row.size()) ? '\n' : ',';
            }
        return out;
    }
};

namespace detail {

struct RowQuantities {
    double q[8];
    std::string status;
};

// nan placeholders keep the table rectangular through error rows; the status
// column says why.
inline RowQuantities analytic_row(const MeasurementSetup& su, const Convention& conv) {
    RowQuantities rq;
    for (double& v : rq.q) v = std::nan("");
    try {
        const ProtocolResult pr = protocol_result(su, conv);
        rq.q[0] = pr.p_succ;
        rq.q[1] = pr.overlap;
        rq.q[2] = pr.amp_x;
        rq.q[3] = pr.amp_p;
        rq.q[4] = pr.weak_value.real();
        rq.q[5] = pr.weak_value.imag();
        rq.q[6] = pr.delta_x;
        rq.q[7] = pr.delta_p;
        rq.status = pr.anomalous ? "anomalous" : "ok";
    } catch (const ZeroPostSelection&) {
        rq.status = "zero_postselection";
    }
    return rq;
}

inline RowQuantities oracle_row(const MeasurementSetup& su) {
    RowQuantities rq;
    for (double& v : rq.q) v = std::nan("");
    try {
        const OracleReport rep = run_protocol(su);
        rq.q[0] = rep.p_succ;
        rq.q[1] = rep.overlap;
        if (su.s > 0.0) {
            rq.q[2] = rep.delta_x / (su.pointer.sigma * su.s);
            rq.q[3] = rep.delta_p * su.pointer.sigma / su.s;
        }
        rq.q[6] = rep.delta_x;
        rq.q[7] = rep.delta_p;
        rq.status = "ok";
    } catch (const ZeroPostSelection&) {
        rq.status = "zero_postselection";
    } catch (const NoConvergence&) {
        rq.status = "no_convergence";
    }
    return rq;
}

inline int output_index(const std::string& name) {
    const auto& vocab = output_vocabulary();
    for (size_t i = 0; i < vocab.size(); ++i)
        if (vocab[i] == name) return int(i);
    throw ConfigError("unknown output quantity: " + name);
}

} // namespace detail

inline int default_sweep_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return int(hw == 0 ? 1 : std::min(hw, 8u));
}

// Rows are computed into preallocated slots claimed through an atomic
// counter, so table content is identical for every thread count.
inline SweepTable run_sweep(const MeasurementSetup& base, const SweepSpec& spec, Engine engine,
                            const Convention& conv = Convention::calibrated(), int threads = 0) {
    validate_axis_range(base, spec.axis1);
    if (spec.axis2) validate_axis_range(base, *spec.axis2);
    for (const auto& name : spec.outputs) detail::output_index(name);

    SweepTable table;
    table.axis1_name = spec.axis1.name;
    table.axis2_name = spec.axis2 ? spec.axis2->name : "none";
    table.columns = {"axis1", "axis2"};
    for (const auto& name : spec.outputs) table.columns.push_back(name);
    if (engine == Engine::both)
        for (const auto& name : spec.outputs)
            if (output_has_oracle(name)) table.columns.push_back(name + "_absdiff");
    table.columns.push_back("status");

    const int n2 = spec.axis2 ? spec.axis2->count : 1;
    const int total = spec.axis1.count * n2;
    table.rows.assign(total, {});

    std::atomic<int> next{0};
    std::mutex fail_mutex;
    std::exception_ptr failure;
    auto worker = [&]() {
        try {
        for (int idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
            const int i1 = idx / n2, i2 = idx % n2;
            const double v1 = spec.axis1.value_at(i1);
            const double v2 = spec.axis2 ? spec.axis2->value_at(i2) : 0.0;
            MeasurementSetup su = base;
            apply_axis(su, spec.axis1.name, v1);
            if (spec.axis2) apply_axis(su, spec.axis2->name, v2);

            detail::RowQuantities an, orc;
            if (engine != Engine::oracle) an = detail::analytic_row(su, conv);
            if (engine != Engine::analytic) orc = detail::oracle_row(su);
            const detail::RowQuantities& lead = (engine == Engine::oracle) ? orc : an;

            std::vector<std::string> row = {format_g17(v1), format_g17(v2)};
            for (const auto& name : spec.outputs)
                row.push_back(format_g17(lead.q[detail::output_index(name)]));
            if (engine == Engine::both) {
                for (const auto& name : spec.outputs) {
                    if (!output_has_oracle(name)) continue;
                    const int qi = detail::output_index(name);
                    row.push_back(format_g17(std::abs(an.q[qi] - orc.q[qi])));
                }
                std::string status = an.status;
                if (orc.status != an.status) status += "|" + orc.status;
                row.push_back(status);
            } else {
                row.push_back(lead.status);
            }
            table.rows[idx] = std::move(row);
        }
        } catch (...) {
            // expected per-row conditions are already folded into row status;
            // anything else stops the sweep and resurfaces after the join
            const std::lock_guard<std::mutex> lock(fail_mutex);
            if (!failure) failure = std::current_exception();
            next.store(total);
        }
    };

    int nthreads = threads > 0 ? threads : default_sweep_threads();
    if (engine == Engine::analytic) nthreads = std::min(nthreads, 4);
    nthreads = std::min(nthreads, total);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

struct NamedTable {
    std::string name;
    SweepTable table;
};

struct CurveDef {
    std::string name;
    MeasurementSetup base;
    SweepSpec spec;
};

struct FigurePreset {
    std::string id;
    std::string description;
    std::vector<CurveDef> curves;
};

namespace detail {

inline MeasurementSetup curve_setup(double theta_i, double phi_i, double theta_f, double phi_f,
                                    double gamma, double p, double n_bar, double r, double chi,
                                    double b, double s) {
    return MeasurementSetup(QubitState(theta_i, phi_i), QubitState(theta_f, phi_f),
                            GadChannel(gamma, p), PointerState(1.0, n_bar, r, chi, 0.0, b), s);
}

inline SweepSpec curve_sweep(const std::string& axis, double start, double stop, int count,
                             std::vector<std::string> outputs) {
    SweepSpec spec;
    spec.axis1 = AxisRange{axis, start, stop, count};
    spec.outputs = std::move(outputs);
    return spec;
}

inline std::string p_tag(double p) {
    if (p == 0.0) return "p0.00";
    if (p == 0.25) return "p0.25";
    return "p0.50";
}

} // namespace detail

// Parameter bindings transcribed from the figure captions. Quantities are
// evaluated with the printed convention constants so the emitted curves match
// the publication.
inline FigurePreset figure_preset(const std::string& id) {
    using detail::curve_setup;
    using detail::curve_sweep;
    using detail::p_tag;
    const double ps[3] = {0.0, 0.25, 0.5};

    FigurePreset fp;
    fp.id = id;
    if (id == "fig2") {
        fp.description = "weak value vs final polar angle; north/south pre-selections";
        for (double th_i : {0.25 * pi, 0.75 * pi})
            for (double p : ps) {
                const std::string hemi = th_i < 0.5 * pi ? "north" : "south";
                fp.curves.push_back(
                    {"fig2_" + hemi + "_" + p_tag(p),
                     curve_setup(th_i, 0.0, 0.5 * pi, 0.99 * pi, 0.1, p, 0.5, 0.0, 0.0, 0.0, 0.01),
                     curve_sweep("theta_f", 0.0, pi, 201, {"wv_re", "wv_im"})});
            }
    } else if (id == "fig3") {
        fp.description = "success probability: angular suppression and running-phase fringes";
        for (double p : ps)
            fp.curves.push_back(
                {"fig3_a_" + p_tag(p),
                 curve_setup(0.75 * pi, 0.0, 0.5 * pi, 0.99 * pi, 0.1, p, 0.5, 0.0, 0.0, 0.0, 0.01),
                 curve_sweep("theta_f", 0.0, pi, 201, {"p_succ"})});
        for (double p : ps)
            fp.curves.push_back(
                {"fig3_b_" + p_tag(p),
                 curve_setup(0.75 * pi, 0.0, 0.25 * pi, 0.99 * pi, 0.1, p, 0.5, 0.0, 0.0, 6.0, 0.0),
                 curve_sweep("s", 0.0, 1.5, 301, {"p_succ"})});
    } else if (id == "fig4") {
        fp.description = "weak-to-strong overlap: monotone decay and displaced-pointer revivals";
        // the selection azimuth keeps the interference term small and positive:
        // decay stays monotone at b=0 while a hotter channel still decays
        // strictly faster
        for (double p : ps)
            fp.curves.push_back(
                {"fig4_a_" + p_tag(p),
                 curve_setup(0.25 * pi, 0.0, 0.125 * pi, 0.4 * pi, 0.8, p, 0.5, 0.0, 0.0, 0.0, 0.0),
                 curve_sweep("s", 0.0, 3.0, 301, {"overlap", "p_succ"})});
        for (double p : ps)
            fp.curves.push_back(
                {"fig4_b_" + p_tag(p),
                 curve_setup(0.25 * pi, 0.0, 0.125 * pi, 0.4 * pi, 0.8, p, 0.5, 0.0, 0.0, 2.0, 0.0),
                 curve_sweep("s", 0.0, 3.0, 301, {"overlap", "p_succ"})});
    } else if (id == "fig5") {
        fp.description = "squeezing-phase effect on the weak-to-strong transition";
        for (double chi : {0.0, 0.25 * pi, 0.5 * pi}) {
            char tag[16];
            std::snprintf(tag, sizeof(tag), "chi%.2fpi", chi / pi);
            fp.curves.push_back(
                {std::string("fig5_") + tag,
                 curve_setup(0.25 * pi, 0.0, 0.125 * pi, 0.99 * pi, 0.8, 0.0, 0.5, 0.5, chi, 2.0,
                             0.0),
                 curve_sweep("s", 0.0, 2.5, 251, {"overlap", "p_succ"})});
        }
    } else if (id == "fig6") {
        fp.description = "position and momentum amplification factors vs final polar angle";
        for (double p : ps)
            fp.curves.push_back(
                {"fig6_a_" + p_tag(p),
                 curve_setup(0.75 * pi, 0.0, 0.5 * pi, 0.99 * pi, 0.1, p, 0.5, 0.0, 0.0, 0.0, 0.01),
                 curve_sweep("theta_f", 0.0, pi, 201, {"amp_x", "amp_p"})});
        for (double p : ps)
            fp.curves.push_back(
                {"fig6_b_" + p_tag(p),
                 curve_setup(0.75 * pi, 0.0, 0.5 * pi, 0.99 * pi, 0.1, p, 0.5, 0.0, 0.0, 0.0, 5.0),
                 curve_sweep("theta_f", 0.0, pi, 201, {"amp_x", "amp_p"})});
    } else {
        throw ConfigError("unknown figure id: " + id + " (expected fig2..fig6)");
    }
    return fp;
}

inline std::vector<NamedTable> figure_curves(const std::string& id) {
    const FigurePreset fp = figure_preset(id);
    std::vector<NamedTable> out;
    for (const auto& curve : fp.curves)
        out.push_back(
            {curve.name,
             run_sweep(curve.base, curve.spec, Engine::analytic, Convention::paper_printed())});
    return out;
}

} // namespace psel
