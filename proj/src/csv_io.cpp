#include "meneuron/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "meneuron/errors.hpp"

namespace meneuron {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    return format_double(v);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        while (!f.empty() && f.front() == ' ') f.erase(f.begin());
    }
    return out;
}

struct CsvTable {
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_table(const fs::path& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path.string() + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) {
        throw ConfigError("'" + path.string() + "': expected header '" + header + "', found '" + line + "'");
    }
    const std::size_t columns = split(header).size();
    CsvTable t;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (fields.size() != columns) {
            throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) + ": expected " +
                              std::to_string(columns) + " fields");
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

double to_double(const std::string& s, const fs::path& path) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("'" + path.string() + "': cannot parse '" + s + "' as a number");
    }
    return v;
}

std::size_t to_count(const std::string& s, const fs::path& path) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("'" + path.string() + "': cannot parse '" + s + "' as a count");
    }
    return v;
}

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

std::string trajectory_file_name(std::uint64_t seed, const BiasPoint& bias) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "traj_%llu_%.3f_%.3f.csv", static_cast<unsigned long long>(seed),
                  bias.v_me * 1e3, bias.v_i * 1e3);
    return buf;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& t) {
    auto out = open_out(path);
    out << "time_s,mx,my,mz\n";
    for (const auto& s : t.samples) {
        out << num(s.time) << ',' << num(s.m.x) << ',' << num(s.m.y) << ',' << num(s.m.z) << '\n';
    }
    check_written(out, path);
}

void write_dwells_csv(const fs::path& path, std::span<const DwellRecord> dwells) {
    auto out = open_out(path);
    out << "state,start_time_s,duration_s\n";
    for (const auto& d : dwells) out << to_string(d.state) << ',' << num(d.start_time) << ',' << num(d.duration) << '\n';
    check_written(out, path);
}

void write_lifetime_summary_csv(const fs::path& path, const BiasPoint& bias,
                                std::span<const LifetimeEstimate> estimates) {
    auto out = open_out(path);
    out << "v_me,v_i,state,mean_s,stderr_s,count,ks_stat\n";
    for (const auto& e : estimates) {
        out << num(bias.v_me) << ',' << num(bias.v_i) << ',' << to_string(e.state) << ',' << num(e.mean) << ','
            << num(e.std_error) << ',' << e.count << ',' << num(e.ks_statistic) << '\n';
    }
    check_written(out, path);
}

namespace {
constexpr const char* kGridHeader =
    "axis_kind,v_a,v_b,tau_p_mean_s,tau_p_stderr_s,tau_p_count,tau_ap_mean_s,tau_ap_stderr_s,tau_ap_count,flags";
}

void write_grid_csv(const fs::path& path, const LifetimeGrid& grid) {
    validate(grid);
    auto out = open_out(path);
    out << kGridHeader << '\n';
    for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
        for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
            const GridCell& c = grid.at(i, j);
            out << to_string(grid.axis_kind) << ',' << num(grid.axis1[i]) << ',' << num(grid.axis2[j]) << ','
                << num(c.tau_p.mean) << ',' << num(c.tau_p.std_error) << ',' << c.tau_p.count << ','
                << num(c.tau_ap.mean) << ',' << num(c.tau_ap.std_error) << ',' << c.tau_ap.count << ','
                << flags_to_string(c.flags) << '\n';
        }
    }
    check_written(out, path);
}

LifetimeGrid read_grid_csv(const fs::path& path) {
    const CsvTable t = read_table(path, kGridHeader);
    if (t.rows.empty()) throw ConfigError("'" + path.string() + "' has no grid rows");
    LifetimeGrid g;
    const std::string kind = t.rows.front()[0];
    if (kind == "ME_I") {
        g.axis_kind = AxisKind::ME_I;
    } else if (kind == "V1_V2") {
        g.axis_kind = AxisKind::V1_V2;
    } else {
        throw ConfigError("'" + path.string() + "': unknown axis_kind '" + kind + "'");
    }
    std::map<std::pair<double, double>, GridCell> cells;
    for (const auto& r : t.rows) {
        if (r[0] != kind) throw ConfigError("'" + path.string() + "': mixed axis_kind values");
        const double a = to_double(r[1], path), b = to_double(r[2], path);
        GridCell c;
        c.tau_p.mean = to_double(r[3], path);
        c.tau_p.std_error = to_double(r[4], path);
        c.tau_p.count = to_count(r[5], path);
        c.tau_ap.mean = to_double(r[6], path);
        c.tau_ap.std_error = to_double(r[7], path);
        c.tau_ap.count = to_count(r[8], path);
        c.flags = flags_from_string(r[9]);
        c.bias = {a, b};
        if (!cells.emplace(std::pair{a, b}, c).second) {
            throw ConfigError("'" + path.string() + "': duplicate node (" + r[1] + ", " + r[2] + ")");
        }
        g.axis1.push_back(a);
        g.axis2.push_back(b);
    }
    for (auto* axis : {&g.axis1, &g.axis2}) {
        std::sort(axis->begin(), axis->end());
        axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
    }
    if (cells.size() != g.axis1.size() * g.axis2.size()) {
        throw ConfigError("'" + path.string() + "': nodes do not form a complete rectangular grid");
    }
    for (double a : g.axis1) {
        for (double b : g.axis2) g.cells.push_back(cells.at({a, b}));
    }
    validate(g);
    return g;
}

void write_spike_train_csv(const fs::path& path, const SpikeTrain& train) {
    auto out = open_out(path);
    out << "spike_time_s\n";
    for (double t : train.spike_times) out << num(t) << '\n';
    check_written(out, path);
}

void write_waveform_csv(const fs::path& path, const SpikeTrain& train) {
    auto out = open_out(path);
    out << "time_s,state\n";
    for (const auto& [t, s] : train.waveform) out << num(t) << ',' << to_string(s) << '\n';
    check_written(out, path);
}

std::vector<DriveSegment> read_drive_csv(const fs::path& path) {
    const CsvTable t = read_table(path, "t_start_s,v1,v2");
    std::vector<DriveSegment> drive;
    for (const auto& r : t.rows) drive.push_back({to_double(r[0], path), to_double(r[1], path), to_double(r[2], path)});
    validate_drive(drive);
    return drive;
}

void write_drive_csv(const fs::path& path, std::span<const DriveSegment> drive) {
    auto out = open_out(path);
    out << "t_start_s,v1,v2\n";
    for (const auto& d : drive) out << num(d.t_start) << ',' << num(d.v1) << ',' << num(d.v2) << '\n';
    check_written(out, path);
}

void write_angles_report(const fs::path& path, const ContourCalibration& cal) {
    const auto& a = cal.angles;
    const auto& m = a.matrix();
    const auto& n = a.inverse();
    auto out = open_out(path);
    out << "# V1 = m00 V_ME + m01 V_I, V2 = m10 V_ME + m11 V_I\n"
        << "# basis angles are gradient directions of log tau; contour angles are the\n"
        << "# directions of the constant-lifetime lines (basis + 90 deg)\n"
        << "alpha_basis_rad = " << num(a.alpha_basis()) << '\n'
        << "alpha_basis_deg = " << num(degrees(a.alpha_basis())) << '\n'
        << "beta_basis_rad = " << num(a.beta_basis()) << '\n'
        << "beta_basis_deg = " << num(degrees(a.beta_basis())) << '\n'
        << "alpha_contour_deg = " << num(degrees(a.alpha_contour())) << '\n'
        << "beta_contour_deg = " << num(degrees(a.beta_contour())) << '\n'
        << "r2_ap = " << num(cal.fit_ap.r2) << '\n'
        << "r2_p = " << num(cal.fit_p.r2) << '\n'
        << "grad_log_tau_ap = " << num(cal.fit_ap.grad1) << ", " << num(cal.fit_ap.grad2) << '\n'
        << "grad_log_tau_ap_sigma = " << num(cal.fit_ap.sigma_grad1) << ", " << num(cal.fit_ap.sigma_grad2) << '\n'
        << "grad_log_tau_p = " << num(cal.fit_p.grad1) << ", " << num(cal.fit_p.grad2) << '\n'
        << "grad_log_tau_p_sigma = " << num(cal.fit_p.sigma_grad1) << ", " << num(cal.fit_p.sigma_grad2) << '\n'
        << "m00 = " << num(m[0]) << '\n'
        << "m01 = " << num(m[1]) << '\n'
        << "m10 = " << num(m[2]) << '\n'
        << "m11 = " << num(m[3]) << '\n'
        << "inv00 = " << num(n[0]) << '\n'
        << "inv01 = " << num(n[1]) << '\n'
        << "inv10 = " << num(n[2]) << '\n'
        << "inv11 = " << num(n[3]) << '\n';
    check_written(out, path);
}

BasisAngles read_angles_report(const fs::path& path) {
    namespace pt = boost::property_tree;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read angles report '" + path.string() + "'");
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("angles report '" + path.string() + "': " + e.what());
    }
    auto get = [&](const char* key) {
        const auto v = tree.get_optional<std::string>(key);
        if (!v) throw ConfigError("angles report '" + path.string() + "' lacks " + key);
        return to_double(*v, path);
    };
    return BasisAngles(get("alpha_basis_rad"), get("beta_basis_rad"));
}

}  // namespace meneuron
