#pragma once

#include <logicp/dataset.hpp>
#include <logicp/errors.hpp>
#include <logicp/geometry.hpp>
#include <logicp/metrics.hpp>
#include <logicp/parallel.hpp>
#include <logicp/records.hpp>

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace logicp::io {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Text helpers

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const auto b = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > b) out.push_back(line.substr(b, i - b));
    }
    return out;
}

inline std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

inline std::optional<double> to_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<Quantity> to_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    Quantity v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline double finite_coordinate(std::string_view field, const std::string& source, std::size_t line) {
    const auto v = to_double(field);
    if (!v) throw ParseError(where(source, line) + "'" + std::string(field) + "' is not a number");
    if (!std::isfinite(*v)) throw ParseError(where(source, line) + "non-finite coordinate '" + std::string(field) + "'");
    return *v;
}

inline std::ifstream open_for_reading(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

inline std::ofstream open_for_writing(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void finish_writing(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace detail

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_shortest(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Fixed four decimals, as in score tables.
inline std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Scans

enum class ScanFormat { xyz, csv, ply_ascii };

inline std::optional<ScanFormat> parse_scan_format(std::string_view name) {
    if (name == "xyz") return ScanFormat::xyz;
    if (name == "csv") return ScanFormat::csv;
    if (name == "ply-ascii" || name == "ply") return ScanFormat::ply_ascii;
    return std::nullopt;
}

/// By extension: .csv, .ply, anything else is whitespace xyz.
inline ScanFormat scan_format_from_path(const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv" || ext == ".CSV") return ScanFormat::csv;
    if (ext == ".ply" || ext == ".PLY") return ScanFormat::ply_ascii;
    return ScanFormat::xyz;
}

namespace detail {

inline PointCloud parse_xyz(std::istream& in, const std::string& source) {
    std::vector<Point3> pts;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto f = split_whitespace(line);
        if (f.empty()) continue;
        if (f.size() != 3)
            throw ParseError(where(source, n) + "expected 3 values, found " + std::to_string(f.size()));
        pts.push_back({finite_coordinate(f[0], source, n), finite_coordinate(f[1], source, n),
                       finite_coordinate(f[2], source, n)});
    }
    if (pts.empty()) throw ParseError(source + ": no points");
    return PointCloud(std::move(pts));
}

inline PointCloud parse_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source + ": empty file");
    const auto header = split_fields(line, ',');
    if (header.size() != 3 || header[0] != "x" || header[1] != "y" || header[2] != "z")
        throw ParseError(where(source, 1) + "expected header 'x,y,z'");
    std::vector<Point3> pts;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) continue;
        const auto f = split_fields(line, ',');
        if (f.size() != 3)
            throw ParseError(where(source, n) + "expected 3 fields, found " + std::to_string(f.size()));
        pts.push_back({finite_coordinate(f[0], source, n), finite_coordinate(f[1], source, n),
                       finite_coordinate(f[2], source, n)});
    }
    if (pts.empty()) throw ParseError(source + ": no points");
    return PointCloud(std::move(pts));
}

/// ASCII PLY: only the `vertex` element's x, y, z are kept.
inline PointCloud parse_ply_ascii(std::istream& in, const std::string& source) {
    struct Element {
        std::string name;
        std::size_t count = 0;
        std::vector<std::string> properties;
        bool has_list = false;
    };
    std::string line;
    std::size_t n = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++n;
        return true;
    };

    if (!next_line() || trim(line) != "ply") throw ParseError(where(source, 1) + "missing 'ply' magic");
    std::vector<Element> elements;
    bool format_seen = false;
    for (;;) {
        if (!next_line()) throw ParseError(source + ": header not terminated by end_header");
        const auto f = split_whitespace(line);
        if (f.empty()) continue;
        if (f[0] == "end_header") break;
        if (f[0] == "comment" || f[0] == "obj_info") continue;
        if (f[0] == "format") {
            if (f.size() != 3 || f[1] != "ascii")
                throw ParseError(where(source, n) + "only 'format ascii 1.0' is supported");
            format_seen = true;
        } else if (f[0] == "element") {
            const auto count = f.size() == 3 ? to_integer(f[2]) : std::nullopt;
            if (!count || *count < 0) throw ParseError(where(source, n) + "malformed element declaration");
            elements.push_back({std::string(f[1]), static_cast<std::size_t>(*count), {}, false});
        } else if (f[0] == "property") {
            if (elements.empty()) throw ParseError(where(source, n) + "property before any element");
            if (f.size() >= 2 && f[1] == "list") {
                if (f.size() != 5) throw ParseError(where(source, n) + "malformed list property");
                elements.back().has_list = true;
                elements.back().properties.emplace_back(f[4]);
            } else {
                if (f.size() != 3) throw ParseError(where(source, n) + "malformed property");
                elements.back().properties.emplace_back(f[2]);
            }
        } else {
            throw ParseError(where(source, n) + "unknown header keyword '" + std::string(f[0]) + "'");
        }
    }
    if (!format_seen) throw ParseError(source + ": missing format line");

    std::vector<Point3> pts;
    bool vertex_seen = false;
    for (const auto& el : elements) {
        const bool is_vertex = el.name == "vertex";
        int ix = -1, iy = -1, iz = -1;
        if (is_vertex) {
            vertex_seen = true;
            if (el.has_list) throw ParseError(source + ": list properties on vertices are not supported");
            for (std::size_t i = 0; i < el.properties.size(); ++i) {
                if (el.properties[i] == "x") ix = static_cast<int>(i);
                if (el.properties[i] == "y") iy = static_cast<int>(i);
                if (el.properties[i] == "z") iz = static_cast<int>(i);
            }
            if (ix < 0 || iy < 0 || iz < 0) throw ParseError(source + ": vertex element lacks x, y or z");
            pts.reserve(el.count);
        }
        for (std::size_t k = 0; k < el.count; ++k) {
            do {
                if (!next_line())
                    throw ParseError(source + ": expected " + std::to_string(el.count) + " '" + el.name +
                                     "' lines, found " + std::to_string(k));
            } while (trim(line).empty());
            if (!is_vertex) continue;
            const auto f = split_whitespace(line);
            if (f.size() != el.properties.size())
                throw ParseError(where(source, n) + "expected " + std::to_string(el.properties.size()) +
                                 " vertex values, found " + std::to_string(f.size()));
            for (const auto& field : f) (void)finite_coordinate(field, source, n);  // every value must be numeric
            pts.push_back({finite_coordinate(f[static_cast<std::size_t>(ix)], source, n),
                           finite_coordinate(f[static_cast<std::size_t>(iy)], source, n),
                           finite_coordinate(f[static_cast<std::size_t>(iz)], source, n)});
        }
    }
    while (next_line())
        if (!trim(line).empty()) throw ParseError(where(source, n) + "data beyond the declared element counts");
    if (!vertex_seen) throw ParseError(source + ": no vertex element");
    if (pts.empty()) throw ParseError(source + ": no points");
    return PointCloud(std::move(pts));
}

}  // namespace detail

/// Parses one scan. Any malformed line is an error naming its line number.
inline PointCloud parse_scan(std::istream& in, ScanFormat format, const std::string& source = "<stream>") {
    switch (format) {
        case ScanFormat::xyz: return detail::parse_xyz(in, source);
        case ScanFormat::csv: return detail::parse_csv(in, source);
        case ScanFormat::ply_ascii: return detail::parse_ply_ascii(in, source);
    }
    throw InvalidInput("unknown scan format");
}

inline PointCloud load_scan(const fs::path& path, ScanFormat format) {
    auto in = detail::open_for_reading(path);
    return parse_scan(in, format, path.string());
}

inline PointCloud load_scan(const fs::path& path) { return load_scan(path, scan_format_from_path(path)); }

/// Coordinates use the shortest round-trip decimal form.
inline void write_scan(std::ostream& out, const PointCloud& cloud, ScanFormat format) {
    const char sep = format == ScanFormat::csv ? ',' : ' ';
    if (format == ScanFormat::csv) out << "x,y,z\n";
    if (format == ScanFormat::ply_ascii)
        out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
            << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    for (const auto& p : cloud)
        out << format_shortest(p.x) << sep << format_shortest(p.y) << sep << format_shortest(p.z) << '\n';
}

inline void write_scan(const fs::path& path, const PointCloud& cloud, ScanFormat format) {
    auto out = detail::open_for_writing(path);
    write_scan(out, cloud, format);
    detail::finish_writing(out, path);
}

inline void write_scan(const fs::path& path, const PointCloud& cloud) {
    write_scan(path, cloud, scan_format_from_path(path));
}

// ---------------------------------------------------------------------------
// Basket tables: `id,<product 1>,...,<product P>`

struct BasketTable {
    std::vector<std::string> product_names;
    std::vector<std::string> ids;  ///< file order
    std::map<std::string, ProductBasket> baskets;
};

inline BasketTable parse_baskets(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source + ": empty file");
    const auto header = detail::split_fields(line, ',');
    if (header.size() < 2 || header[0] != "id")
        throw ParseError(detail::where(source, 1) + "expected header 'id,<product>,...'");
    BasketTable table;
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j].empty()) throw ParseError(detail::where(source, 1) + "empty product name");
        table.product_names.emplace_back(header[j]);
    }
    const std::size_t p = table.product_names.size();
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_fields(line, ',');
        if (f.size() != p + 1)
            throw ParseError(detail::where(source, n) + "expected " + std::to_string(p + 1) + " fields, found " +
                             std::to_string(f.size()));
        if (f[0].empty()) throw ParseError(detail::where(source, n) + "empty id");
        std::vector<Quantity> q;
        q.reserve(p);
        for (std::size_t j = 1; j <= p; ++j) {
            const auto v = detail::to_integer(f[j]);
            if (!v) throw ParseError(detail::where(source, n) + "'" + std::string(f[j]) + "' is not an integer");
            if (*v < 0) throw ParseError(detail::where(source, n) + "negative quantity " + std::string(f[j]));
            q.push_back(*v);
        }
        std::string id(f[0]);
        if (table.baskets.count(id)) throw ParseError(detail::where(source, n) + "duplicate id '" + id + "'");
        table.baskets.emplace(id, ProductBasket(std::move(q)));
        table.ids.push_back(std::move(id));
    }
    return table;
}

inline BasketTable load_baskets(const fs::path& path) {
    auto in = detail::open_for_reading(path);
    return parse_baskets(in, path.string());
}

inline void write_baskets(std::ostream& out, const std::vector<std::string>& product_names,
                          std::span<const std::pair<std::string, ProductBasket>> rows) {
    out << "id";
    for (const auto& name : product_names) out << ',' << name;
    out << '\n';
    for (const auto& [id, basket] : rows) {
        out << id;
        for (auto q : basket.quantities()) out << ',' << q;
        out << '\n';
    }
}

inline void write_baskets(const fs::path& path, const std::vector<std::string>& product_names,
                          std::span<const std::pair<std::string, ProductBasket>> rows) {
    auto out = detail::open_for_writing(path);
    write_baskets(out, product_names, rows);
    detail::finish_writing(out, path);
}

/// `p1..pP`, the column names used when a dataset carries none.
inline std::vector<std::string> default_product_names(std::size_t p) {
    std::vector<std::string> names;
    for (std::size_t j = 1; j <= p; ++j) names.push_back("p" + std::to_string(j));
    return names;
}

// ---------------------------------------------------------------------------
// Manifests: `id,scan_path`, paths relative to the manifest's directory.
// Baskets live in a sibling `baskets.csv` unless given explicitly.

struct ManifestEntry {
    std::string id;
    fs::path scan_path;  ///< resolved against the manifest directory
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

inline fs::path default_baskets_path(const fs::path& manifest_path) {
    return manifest_path.parent_path() / "baskets.csv";
}

inline Manifest load_manifest(const fs::path& path) {
    auto in = detail::open_for_reading(path);
    const std::string source = path.string();
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source + ": empty manifest");
    const auto header = detail::split_fields(line, ',');
    if (header.size() != 2 || header[0] != "id" || header[1] != "scan_path")
        throw ParseError(detail::where(source, 1) + "expected header 'id,scan_path'");
    Manifest m;
    std::set<std::string> seen;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_fields(line, ',');
        if (f.size() != 2 || f[0].empty() || f[1].empty())
            throw ParseError(detail::where(source, n) + "expected 'id,scan_path'");
        std::string id(f[0]);
        if (!seen.insert(id).second) throw ParseError(detail::where(source, n) + "duplicate id '" + id + "'");
        fs::path scan{std::string(f[1])};
        if (scan.is_relative()) scan = path.parent_path() / scan;
        if (!fs::exists(scan))
            throw ParseError(detail::where(source, n) + "scan file '" + scan.string() + "' does not exist");
        m.entries.push_back({std::move(id), std::move(scan)});
    }
    return m;
}

/// Scan paths are written relative to the manifest's directory when possible.
inline void write_manifest(const fs::path& path, std::span<const ManifestEntry> entries) {
    auto out = detail::open_for_writing(path);
    const auto base = fs::absolute(path).parent_path();
    out << "id,scan_path\n";
    for (const auto& e : entries) {
        auto rel = fs::absolute(e.scan_path).lexically_relative(base);
        out << e.id << ',' << (rel.empty() ? fs::absolute(e.scan_path) : rel).generic_string() << '\n';
    }
    detail::finish_writing(out, path);
}

/// Manifest scans joined with their baskets.
inline Dataset load_dataset(const fs::path& manifest_path, const fs::path& baskets_path, unsigned jobs = 1) {
    const auto manifest = load_manifest(manifest_path);
    const auto table = load_baskets(baskets_path);
    for (const auto& e : manifest.entries)
        if (!table.baskets.count(e.id))
            throw InvalidInput("log '" + e.id + "' has no row in '" + baskets_path.string() + "'");

    std::vector<std::optional<PointCloud>> scans(manifest.entries.size());
    parallel_for(scans.size(), jobs, [&](std::size_t i) { scans[i].emplace(load_scan(manifest.entries[i].scan_path)); });

    Dataset ds;
    ds.product_count = table.product_names.size();
    ds.product_names = table.product_names;
    ds.records.reserve(scans.size());
    for (std::size_t i = 0; i < scans.size(); ++i) {
        const auto& id = manifest.entries[i].id;
        ds.records.push_back({id, std::move(*scans[i]), table.baskets.at(id), std::nullopt});
    }
    ds.validate();
    return ds;
}

inline std::string_view scan_extension(ScanFormat format) {
    switch (format) {
        case ScanFormat::csv: return ".csv";
        case ScanFormat::ply_ascii: return ".ply";
        default: return ".xyz";
    }
}

/// Writes `dir/scans/<id>.<ext>`, `dir/manifest.csv` and `dir/baskets.csv`.
/// Returns the manifest path.
inline fs::path write_dataset(const Dataset& ds, const fs::path& dir, ScanFormat format = ScanFormat::csv) {
    ds.validate();
    fs::create_directories(dir / "scans");
    std::vector<ManifestEntry> entries;
    std::vector<std::pair<std::string, ProductBasket>> rows;
    for (const auto& r : ds.records) {
        const auto scan_path = dir / "scans" / (r.id + std::string(scan_extension(format)));
        write_scan(scan_path, r.scan, format);
        entries.push_back({r.id, scan_path});
        rows.emplace_back(r.id, r.basket);
    }
    const auto manifest = dir / "manifest.csv";
    write_manifest(manifest, entries);
    write_baskets(dir / "baskets.csv",
                  ds.product_names.empty() ? default_product_names(ds.product_count) : ds.product_names, rows);
    return manifest;
}

// ---------------------------------------------------------------------------
// Predictions: `id,neighbor_id,distance,<products...>`

struct PredictionRow {
    std::string id;
    std::optional<std::string> neighbor_id;
    std::optional<double> distance;
    ProductBasket basket;
};

struct PredictionTable {
    std::vector<std::string> product_names;
    std::vector<PredictionRow> rows;
};

inline void write_predictions(std::ostream& out, const PredictionTable& table) {
    out << "id,neighbor_id,distance";
    for (const auto& name : table.product_names) out << ',' << name;
    out << '\n';
    for (const auto& r : table.rows) {
        out << r.id << ',' << r.neighbor_id.value_or("") << ',';
        if (r.distance) out << format_shortest(*r.distance);
        for (auto q : r.basket.quantities()) out << ',' << q;
        out << '\n';
    }
}

inline void write_predictions(const fs::path& path, const PredictionTable& table) {
    auto out = detail::open_for_writing(path);
    write_predictions(out, table);
    detail::finish_writing(out, path);
}

inline PredictionTable parse_predictions(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source + ": empty file");
    const auto header = detail::split_fields(line, ',');
    if (header.size() < 4 || header[0] != "id" || header[1] != "neighbor_id" || header[2] != "distance")
        throw ParseError(detail::where(source, 1) + "expected header 'id,neighbor_id,distance,<product>,...'");
    PredictionTable t;
    for (std::size_t j = 3; j < header.size(); ++j) t.product_names.emplace_back(header[j]);
    std::set<std::string> seen;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_fields(line, ',');
        if (f.size() != header.size())
            throw ParseError(detail::where(source, n) + "expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(f.size()));
        PredictionRow row;
        row.id = std::string(f[0]);
        if (row.id.empty()) throw ParseError(detail::where(source, n) + "empty id");
        if (!seen.insert(row.id).second) throw ParseError(detail::where(source, n) + "duplicate id '" + row.id + "'");
        if (!f[1].empty()) row.neighbor_id = std::string(f[1]);
        if (!f[2].empty()) {
            const auto d = detail::to_double(f[2]);
            if (!d) throw ParseError(detail::where(source, n) + "distance is not a number");
            row.distance = *d;
        }
        std::vector<Quantity> q;
        for (std::size_t j = 3; j < f.size(); ++j) {
            const auto v = detail::to_integer(f[j]);
            if (!v || *v < 0)
                throw ParseError(detail::where(source, n) + "'" + std::string(f[j]) + "' is not a non-negative integer");
            q.push_back(*v);
        }
        row.basket = ProductBasket(std::move(q));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline PredictionTable load_predictions(const fs::path& path) {
    auto in = detail::open_for_reading(path);
    return parse_predictions(in, path.string());
}

// ---------------------------------------------------------------------------
// Score reports

struct LabeledReport {
    std::string predictor;
    ScoreReport report;
};

enum class ReportFormat { csv, json };

inline std::optional<ReportFormat> parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    return std::nullopt;
}

inline constexpr std::string_view kReportHeader = "predictor,s_z,one_minus_dH,one_minus_dHplus,s_pre,s_pro,s_pro_x_pre,n";

inline void write_report_csv(std::ostream& out, std::span<const LabeledReport> reports) {
    out << kReportHeader << '\n';
    for (const auto& [name, r] : reports)
        out << name << ',' << format_score(r.s_z) << ',' << format_score(r.one_minus_dH) << ','
            << format_score(r.one_minus_dHplus) << ',' << format_score(r.s_pre) << ',' << format_score(r.s_pro)
            << ',' << format_score(r.s_pro_x_pre) << ',' << r.n_evaluated << '\n';
}

namespace detail {

inline double rounded4(double v) { return std::stod(format_score(v)); }

}  // namespace detail

/// JSON array of objects keyed like the csv columns; scores rounded to
/// four decimals.
inline void write_report_json(std::ostream& out, std::span<const LabeledReport> reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [name, r] : reports) {
        nlohmann::ordered_json o;
        o["predictor"] = name;
        o["s_z"] = detail::rounded4(r.s_z);
        o["one_minus_dH"] = detail::rounded4(r.one_minus_dH);
        o["one_minus_dHplus"] = detail::rounded4(r.one_minus_dHplus);
        o["s_pre"] = detail::rounded4(r.s_pre);
        o["s_pro"] = detail::rounded4(r.s_pro);
        o["s_pro_x_pre"] = detail::rounded4(r.s_pro_x_pre);
        o["n"] = r.n_evaluated;
        arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
}

inline void write_report(std::ostream& out, std::span<const LabeledReport> reports, ReportFormat format) {
    if (format == ReportFormat::csv)
        write_report_csv(out, reports);
    else
        write_report_json(out, reports);
}

inline void write_report(const fs::path& path, std::span<const LabeledReport> reports, ReportFormat format) {
    auto out = detail::open_for_writing(path);
    write_report(out, reports, format);
    detail::finish_writing(out, path);
}

inline std::vector<LabeledReport> parse_report_json(std::istream& in) {
    std::vector<LabeledReport> out;
    try {
        const auto arr = nlohmann::json::parse(in);
        if (!arr.is_array()) throw ParseError("report json must be an array");
        for (const auto& o : arr) {
            LabeledReport r;
            r.predictor = o.at("predictor").get<std::string>();
            r.report.s_z = o.at("s_z").get<double>();
            r.report.one_minus_dH = o.at("one_minus_dH").get<double>();
            r.report.one_minus_dHplus = o.at("one_minus_dHplus").get<double>();
            r.report.s_pre = o.at("s_pre").get<double>();
            r.report.s_pro = o.at("s_pro").get<double>();
            r.report.s_pro_x_pre = o.at("s_pro_x_pre").get<double>();
            r.report.n_evaluated = o.at("n").get<std::size_t>();
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report json: ") + e.what());
    }
    return out;
}

inline std::vector<LabeledReport> load_report_json(const fs::path& path) {
    auto in = detail::open_for_reading(path);
    return parse_report_json(in);
}

}  // namespace logicp::io
