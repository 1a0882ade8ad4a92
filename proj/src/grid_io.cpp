#include "dhw/grid_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace dhw {

namespace {

constexpr char kBinaryMagic[8] = {'D', 'H', 'W', 'G', 'R', 'I', 'D', '1'};

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
    std::vector<double> out;
    out.reserve(6);
    const char* p = line.c_str();
    while (true) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) throw GridFormatError("grid csv: bad number on line " + std::to_string(line_no));
        out.push_back(v);
        p = end;
        while (*p == ' ' || *p == '\r') ++p;
        if (*p == '\0') break;
        if (*p != ',') throw GridFormatError("grid csv: expected ',' on line " + std::to_string(line_no));
        ++p;
    }
    return out;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_grid_csv(const DistributionGrid& grid, std::ostream& out) {
    const GridSpec& s = grid.spec;
    out << kGridCsvHeader << '\n';
    for (std::size_t i = 0; i < s.n_par; ++i) {
        const std::string ppar = format_double(s.p_par(i));
        for (std::size_t j = 0; j < s.n_perp; ++j) {
            const std::size_t k = s.index(i, j);
            out << ppar << ',' << format_double(s.p_perp(j)) << ',' << format_double(grid.c2_re[k]) << ','
                << format_double(grid.c2_im[k]) << ',' << format_double(grid.f[k]) << ','
                << format_double(grid.phase[k]) << '\n';
        }
    }
}

void write_grid_csv(const DistributionGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw GridFormatError("cannot open " + path.string() + " for writing");
    write_grid_csv(grid, out);
    if (!out) throw GridFormatError("write failed: " + path.string());
}

DistributionGrid read_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw GridFormatError("grid csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kGridCsvHeader) throw GridFormatError("grid csv: unexpected header '" + line + "'");

    std::vector<std::array<double, 6>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto v = parse_row(line, line_no);
        if (v.size() != 6) throw GridFormatError("grid csv: expected 6 columns on line " + std::to_string(line_no));
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    if (rows.size() < 4) throw GridFormatError("grid csv: need at least a 2x2 grid");

    std::size_t n_perp = 1;
    while (n_perp < rows.size() && rows[n_perp][0] == rows[0][0]) ++n_perp;
    if (rows.size() % n_perp != 0) throw GridFormatError("grid csv: row count is not n_par * n_perp");

    GridSpec spec;
    spec.n_perp = n_perp;
    spec.n_par = rows.size() / n_perp;
    spec.p_par_min = rows.front()[0];
    spec.p_par_max = rows.back()[0];
    spec.p_perp_min = rows.front()[1];
    spec.p_perp_max = rows[n_perp - 1][1];
    spec.validate();

    DistributionGrid g;
    g.spec = spec;
    const std::size_t n = spec.size();
    g.c2_re.resize(n);
    g.c2_im.resize(n);
    g.f.resize(n);
    g.phase.resize(n);
    const double scale = std::max({std::abs(spec.p_par_min), std::abs(spec.p_par_max),
                                   std::abs(spec.p_perp_min), std::abs(spec.p_perp_max)});
    for (std::size_t i = 0; i < spec.n_par; ++i)
        for (std::size_t j = 0; j < spec.n_perp; ++j) {
            const std::size_t k = spec.index(i, j);
            const auto& r = rows[k];
            if (!close(r[0], spec.p_par(i), scale) || !close(r[1], spec.p_perp(j), scale))
                throw GridFormatError("grid csv: nodes are not a uniform row-major lattice (row " +
                                      std::to_string(k + 2) + ")");
            g.c2_re[k] = r[2];
            g.c2_im[k] = r[3];
            g.f[k] = r[4];
            g.phase[k] = r[5];
        }
    return g;
}

DistributionGrid read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GridFormatError("cannot open " + path.string());
    return read_grid_csv(in);
}

std::string grid_metadata_json(const DistributionGrid& grid) {
    const GridSpec& s = grid.spec;
    const GridMeta& m = grid.meta;
    nlohmann::ordered_json j;
    j["e0_ratio"] = m.pulse.e0_ratio;
    j["omega"] = m.pulse.omega;
    j["n_cycles"] = m.pulse.n_cycles;
    j["rtol"] = m.rtol;
    j["atol"] = m.atol;
    j["grid"] = {{"p_par_min", s.p_par_min}, {"p_par_max", s.p_par_max}, {"p_perp_min", s.p_perp_min},
                 {"p_perp_max", s.p_perp_max}, {"n_par", s.n_par}, {"n_perp", s.n_perp}};
    j["picture"] = m.picture;
    j["version"] = m.version;
    j["created"] = m.created;
    return j.dump(2);
}

void apply_grid_metadata_json(const std::string& text, DistributionGrid& grid) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        GridMeta& m = grid.meta;
        m.pulse.e0_ratio = j.at("e0_ratio").get<double>();
        m.pulse.omega = j.at("omega").get<double>();
        m.pulse.n_cycles = j.at("n_cycles").get<int>();
        m.rtol = j.at("rtol").get<double>();
        m.atol = j.at("atol").get<double>();
        m.picture = j.value("picture", std::string{"lab"});
        m.version = j.value("version", std::string{});
        m.created = j.value("created", std::string{});
        const auto& g = j.at("grid");
        if (g.at("n_par").get<std::size_t>() != grid.spec.n_par ||
            g.at("n_perp").get<std::size_t>() != grid.spec.n_perp)
            throw GridFormatError("grid metadata: shape does not match the data");
    } catch (const nlohmann::json::exception& e) {
        throw GridFormatError(std::string("grid metadata: ") + e.what());
    }
}

void write_grid_binary(const DistributionGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GridFormatError("cannot open " + path.string() + " for writing");
    const GridSpec& s = grid.spec;
    const std::uint64_t dims[2] = {s.n_par, s.n_perp};
    const double bounds[4] = {s.p_par_min, s.p_par_max, s.p_perp_min, s.p_perp_max};
    out.write(kBinaryMagic, sizeof kBinaryMagic);
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(bounds), sizeof bounds);
    for (const auto* col : {&grid.c2_re, &grid.c2_im, &grid.f, &grid.phase})
        out.write(reinterpret_cast<const char*>(col->data()),
                  static_cast<std::streamsize>(col->size() * sizeof(double)));
    if (!out) throw GridFormatError("write failed: " + path.string());
}

DistributionGrid read_grid_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GridFormatError("cannot open " + path.string());
    char magic[8];
    std::uint64_t dims[2];
    double bounds[4];
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    in.read(reinterpret_cast<char*>(bounds), sizeof bounds);
    if (!in || std::memcmp(magic, kBinaryMagic, sizeof magic) != 0)
        throw GridFormatError("grid binary: bad header in " + path.string());
    DistributionGrid g;
    g.spec = GridSpec{bounds[0], bounds[1], bounds[2], bounds[3], static_cast<std::size_t>(dims[0]),
                      static_cast<std::size_t>(dims[1])};
    g.spec.validate();
    const std::size_t n = g.spec.size();
    for (auto* col : {&g.c2_re, &g.c2_im, &g.f, &g.phase}) {
        col->resize(n);
        in.read(reinterpret_cast<char*>(col->data()), static_cast<std::streamsize>(n * sizeof(double)));
    }
    if (!in) throw GridFormatError("grid binary: truncated file " + path.string());
    return g;
}

void save_grid(const DistributionGrid& grid, const std::filesystem::path& base) {
    auto with_ext = [&](const char* ext) {
        std::filesystem::path p = base;
        p += ext;
        return p;
    };
    write_grid_csv(grid, with_ext(".csv"));
    std::ofstream meta(with_ext(".json"));
    if (!meta) throw GridFormatError("cannot write metadata next to " + base.string());
    meta << grid_metadata_json(grid) << '\n';
    write_grid_binary(grid, with_ext(".bin"));
}

DistributionGrid load_grid(const std::filesystem::path& csv_path) {
    DistributionGrid g = read_grid_csv(csv_path);
    std::filesystem::path meta = csv_path;
    meta.replace_extension(".json");
    if (std::filesystem::exists(meta)) {
        std::ifstream in(meta);
        std::stringstream ss;
        ss << in.rdbuf();
        apply_grid_metadata_json(ss.str(), g);
    }
    return g;
}

}  // namespace dhw
