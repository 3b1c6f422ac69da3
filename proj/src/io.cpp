#include "lfss/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lfss/errors.hpp"

namespace lfss {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        require(!ec, ErrorKind::Io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::Io, "cannot open " + path.string() + " for writing");
    return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    require(!out.fail(), ErrorKind::Io, "failed writing " + path.string());
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == s.size() && !s.empty(), ErrorKind::Configuration, "not a number: '" + s + "'");
    return v;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const FieldSample& field) {
    const std::size_t N = field.dim();
    const std::size_t d = field.coordinates();
    for (const auto& v : field.values)
        require(v.size() == field.points.size(), ErrorKind::Input, "field values and points differ in length");
    auto out = open_out(path);
    std::string line;
    for (std::size_t l = 0; l < N; ++l) line += (l ? ",t_" : "t_") + std::to_string(l + 1);
    for (std::size_t c = 0; c < d; ++c) line += ",x_" + std::to_string(c + 1);
    out << line << '\n';
    for (std::size_t i = 0; i < field.points.size(); ++i) {
        line.clear();
        for (std::size_t l = 0; l < N; ++l) {
            if (l) line += ',';
            line += num(field.points[i][l]);
        }
        for (std::size_t c = 0; c < d; ++c) line += ',' + num(field.values[c][i]);
        out << line << '\n';
    }
    close_checked(out, path);
}

FieldSample read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, "cannot open " + path.string());
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::Input, path.string() + " is empty");
    const auto header = split(trim(line), ',');
    std::size_t N = 0;
    std::size_t d = 0;
    for (const auto& h : header) {
        if (h.rfind("t_", 0) == 0) {
            require(d == 0, ErrorKind::Input, "time columns must precede value columns");
            ++N;
        } else if (h.rfind("x_", 0) == 0) {
            ++d;
        } else {
            throw Error(ErrorKind::Input, "unexpected column '" + h + "' in " + path.string());
        }
    }
    require(N >= 1 && d >= 1, ErrorKind::Input, "field CSV needs t_ and x_ columns");
    FieldSample f;
    f.values.assign(d, {});
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        require(cells.size() == N + d, ErrorKind::Input, "row " + std::to_string(row) + " has the wrong column count");
        std::vector<double> p(N);
        for (std::size_t l = 0; l < N; ++l) p[l] = parse_real(cells[l]);
        f.points.push_back(std::move(p));
        for (std::size_t c = 0; c < d; ++c) f.values[c].push_back(parse_real(cells[N + c]));
    }
    return f;
}

void write_coefficients_csv(const std::filesystem::path& path, const CoefficientArray& coeffs) {
    const std::size_t N = coeffs.dim();
    auto out = open_out(path);
    std::string line;
    for (std::size_t l = 0; l < N; ++l) {
        if (l) line += ',';
        line += "j_" + std::to_string(l + 1) + ",k_" + std::to_string(l + 1);
    }
    out << line << ",value\n";
    std::vector<std::size_t> idx(N, 0);
    for (double v : coeffs.values) {
        line.clear();
        for (std::size_t l = 0; l < N; ++l) {
            const auto& w = coeffs.axes[l][idx[l]];
            if (l) line += ',';
            line += std::to_string(w.j) + ',' + std::to_string(w.k);
        }
        out << line << ',' << num(v) << '\n';
        for (std::size_t l = N; l-- > 0;) {
            if (++idx[l] < coeffs.axes[l].size()) break;
            idx[l] = 0;
        }
    }
    close_checked(out, path);
}

void write_xy_csv(const std::filesystem::path& path, const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& x_name, const std::string& y_name) {
    require(x.size() == y.size(), ErrorKind::Input, "x and y differ in length");
    auto out = open_out(path);
    out << x_name << ',' << y_name << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) out << num(x[i]) << ',' << num(y[i]) << '\n';
    close_checked(out, path);
}

nlohmann::json provenance_json(const Provenance& p) {
    nlohmann::json j;
    j["method"] = to_string(p.method);
    j["seed"] = p.seed;
    j["streams"] = p.streams;
    j["alpha"] = p.alpha;
    j["H"] = p.H;
    j["kappa"] = p.kappa;
    j["skewness"] = p.skewness;
    if (p.truncation) j["truncation"] = {{"n", p.truncation->n}, {"M", p.truncation->M}};
    if (!p.noise_lower.empty())
        j["noise"] = {{"lower", p.noise_lower},
                      {"upper", p.noise_upper},
                      {"spacing", p.noise_spacing},
                      {"cells", p.noise_cells}};
    j["tail_tol"] = p.tail_tol;
    if (p.vanishing_moments > 0)
        j["wavelet"] = {{"vanishing_moments", p.vanishing_moments},
                        {"refinement_level", p.refinement_level},
                        {"window", p.wavelet_window}};
    return j;
}

nlohmann::json sidecar_json(const Provenance& p, const nlohmann::json& extra) {
    nlohmann::json j = extra.is_object() ? extra : nlohmann::json::object();
    j["schema"] = kSidecarSchema;
    j["provenance"] = provenance_json(p);
    return j;
}

nlohmann::json check_json(const Check& c) {
    nlohmann::json j{{"name", c.name}, {"theory", c.theory}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    j["estimate"] = std::isfinite(c.estimate) ? nlohmann::json(c.estimate) : nlohmann::json(nullptr);
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

nlohmann::json checks_json(const std::vector<Check>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back(check_json(c));
        all = all && c.pass;
    }
    return {{"schema", kSidecarSchema}, {"checks", arr}, {"pass", all}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    close_checked(out, path);
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Input, path.string() + ": " + e.what());
    }
}

std::map<std::string, std::string> read_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, "cannot open config " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, ErrorKind::Configuration,
                path.string() + ":" + std::to_string(row) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        require(!key.empty(), ErrorKind::Configuration, path.string() + ":" + std::to_string(row) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_real(item));
    require(!out.empty(), ErrorKind::Configuration, "empty list");
    return out;
}

std::vector<std::size_t> parse_shape(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split(text, 'x')) {
        const double v = parse_real(item);
        require(v >= 1.0 && v == std::floor(v) && v < 1e9, ErrorKind::Configuration,
                "grid sizes must be positive integers: '" + text + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

}  // namespace lfss
