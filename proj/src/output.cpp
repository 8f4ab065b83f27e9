#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "iondeco/error.hpp"
#include "iondeco/harness.hpp"

namespace iondeco::harness {

namespace {

std::string num15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_metadata(std::ostream& out, const Metadata& meta) {
    for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

}  // namespace

void emit_csv(const dynamics::Trajectory& traj, const std::string& path, const Metadata& meta) {
    auto out = open_out(path);
    out << "# regime: " << rates::regime_name(traj.regime) << '\n';
    write_metadata(out, meta);
    out << "tau,s11,s22,s12_re,s12_im";
    for (const auto& label : dynamics::excited_labels(traj.regime)) out << ',' << label;
    out << ",eta\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        out << num15(traj.times[i]) << ',' << num15(s.s11) << ',' << num15(s.s22) << ','
            << num15(s.s12_re) << ',' << num15(s.s12_im);
        if (traj.regime == rates::Regime::Bang)
            out << ',' << num15(s.s_pp) << ',' << num15(s.s_mm);
        else
            out << ',' << num15(s.s33);
        out << ',' << num15(traj.purity[i]) << '\n';
    }
    finish(out, path);
}

void emit_csv(const SweepCurve& curve, const std::string& path, const Metadata& meta) {
    auto out = open_out(path);
    write_metadata(out, meta);
    out << "# axis: " << curve.axis_label << '\n';
    if (!curve.values.empty())
        out << "# peak: " << num15(curve.peak.x) << ' ' << num15(curve.peak.value) << '\n';
    out << "# crossover: " << (curve.crossover ? num15(*curve.crossover) : "none") << '\n';
    out << "x,rate\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << num15(curve.grid[i]) << ',' << num15(curve.values[i]) << '\n';
    finish(out, path);
}

dynamics::Trajectory parse_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    std::vector<std::string> header;
    std::string regime_tag;
    const std::string regime_key = "# regime: ";
    while (std::getline(in, line)) {
        if (line.rfind(regime_key, 0) == 0) regime_tag = line.substr(regime_key.size());
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
        break;
    }
    dynamics::Trajectory traj;
    if (header.size() == 8 && header[5] == "s_pp" && header[6] == "s_mm") {
        traj.regime = rates::Regime::Bang;
    } else if (header.size() == 7 && header[5] == "s33") {
        traj.regime = regime_tag == "zeno" ? rates::Regime::Zeno : rates::Regime::None;
    } else {
        throw IoError("'" + path + "' does not have a trajectory header");
    }
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> cells;
        std::stringstream ss(line);
        try {
            for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw IoError("'" + path + "': malformed number on data row " + std::to_string(row));
        }
        if (cells.size() != header.size())
            throw IoError("'" + path + "': wrong column count on data row " + std::to_string(row));
        dynamics::SystemState s;
        s.regime = traj.regime;
        s.s11 = cells[1];
        s.s22 = cells[2];
        s.s12_re = cells[3];
        s.s12_im = cells[4];
        if (traj.regime == rates::Regime::Bang) {
            s.s_pp = cells[5];
            s.s_mm = cells[6];
        } else {
            s.s33 = cells[5];
        }
        traj.times.push_back(cells[0]);
        traj.states.push_back(s);
        traj.purity.push_back(cells.back());
    }
    return traj;
}

// ---- SVG ----------------------------------------------------------------

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo, hi;
    bool log;
    double pixel_lo, pixel_hi;

    double map(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double t = ((log ? std::log10(v) : v) - a) / (b - a);
        return pixel_lo + t * (pixel_hi - pixel_lo);
    }

    std::vector<double> ticks() const {
        std::vector<double> t;
        if (log) {
            for (double e = std::ceil(std::log10(lo) - 1e-9); e <= std::floor(std::log10(hi) + 1e-9);
                 e += 1.0)
                t.push_back(std::pow(10.0, e));
        } else {
            for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
        }
        return t;
    }
};

Axis make_axis(const std::vector<PlotSeries>& series, bool use_x, bool log, double pixel_lo,
               double pixel_hi, std::optional<double> extra) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto take = [&](double v) {
        if (!std::isfinite(v) || (log && !(v > 0.0))) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };
    for (const auto& s : series)
        for (double v : use_x ? s.x : s.y) take(v);
    if (extra) take(*extra);
    if (!std::isfinite(lo)) {
        lo = log ? 1.0 : 0.0;
        hi = log ? 10.0 : 1.0;
    }
    if (lo == hi) {
        if (log) {
            lo /= 10.0;
            hi *= 10.0;
        } else {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    if (log) {
        lo = std::pow(10.0, std::floor(std::log10(lo)));
        hi = std::pow(10.0, std::ceil(std::log10(hi)));
    }
    return Axis{lo, hi, log, pixel_lo, pixel_hi};
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace

void emit_svg(const std::vector<PlotSeries>& series, const PlotOptions& options,
              const std::string& path) {
    const Axis ax = make_axis(series, true, options.log_x, kLeft, kWidth - kRight, std::nullopt);
    const Axis ay =
        make_axis(series, false, options.log_y, kHeight - kBottom, kTop, options.reference_y);

    auto out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(options.title) << "</text>\n";
    out << "<g stroke=\"black\" fill=\"none\">\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
        << "\" height=\"" << kHeight - kTop - kBottom << "\"/>\n";
    out << "</g>\n";

    out << "<g font-size=\"11\">\n";
    for (double t : ax.ticks()) {
        const double px = ax.map(t);
        out << "<line x1=\"" << px << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double py = ay.map(t);
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\""
            << py << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
            << tick_label(t) << "</text>\n";
    }
    out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2
        << ")\">" << escape(options.y_label) << "</text>\n";
    out << "</g>\n";

    if (options.reference_y && (!ay.log || *options.reference_y > 0.0)) {
        const double py = ay.map(*options.reference_y);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kWidth - kRight
            << "\" y2=\"" << py << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kColors[k % 5] << '"';
        if (s.dashed) out << " stroke-dasharray=\"6,4\"";
        out << " points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        bool first = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if ((ax.log && !(s.x[i] > 0.0)) || (ay.log && !(s.y[i] > 0.0))) continue;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", ax.map(s.x[i]),
                          ay.map(s.y[i]));
            out << buf;
            first = false;
        }
        out << "\"><title>" << escape(s.label) << "</title></polyline>\n";
        out << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 14.0 * k
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << kColors[k % 5] << "\">"
            << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    finish(out, path);
}

void emit_svg(const dynamics::Trajectory& traj, const std::string& path,
              const dynamics::Trajectory* baseline) {
    std::vector<PlotSeries> series;
    series.push_back({std::string("eta (") + std::string(rates::regime_name(traj.regime)) + ")",
                      traj.times, traj.purity, false});
    if (baseline) series.push_back({"eta (no control)", baseline->times, baseline->purity, true});
    PlotOptions opt;
    opt.title = "Purity of the target states";
    opt.x_label = "tau [1/gamma_d]";
    opt.y_label = "eta";
    emit_svg(series, opt, path);
}

void emit_svg(const SweepCurve& curve, const std::string& path) {
    PlotOptions opt;
    opt.title = "Decoherence rate vs control frequency";
    opt.x_label = curve.axis_label;
    opt.y_label = "gamma_d [uncontrolled gamma_d]";
    opt.log_x = true;
    opt.log_y = true;
    opt.reference_y = 1.0;
    emit_svg({PlotSeries{"gamma_d", curve.grid, curve.values, false}}, opt, path);
}

}  // namespace iondeco::harness
