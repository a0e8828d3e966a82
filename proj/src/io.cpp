#include "fepls/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fepls/errors.hpp"

namespace fepls {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void Manifest::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) { set(key, format_double(value)); }
void Manifest::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

const std::string* Manifest::find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path.string());
    return in;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

bool parse_row(const std::string& line, std::vector<double>& row) {
    row.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        double v = 0.0;
        if (!parse_number(cell, v)) return false;
        row.push_back(v);
    }
    return !row.empty();
}

}  // namespace

void Manifest::write(const fs::path& path) const {
    auto out = open_out(path);
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

Manifest Manifest::read(const fs::path& path) {
    auto in = open_in(path);
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        m.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return m;
}

void write_columns_csv(const fs::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("header and columns differ in count");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("columns differ in length");
    auto out = open_out(path);
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_double(columns[j][i]);
        out << '\n';
    }
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::vector<double> row;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (!parse_row(line, row)) {
            if (line_no == 1) continue;
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": not a numeric row");
        }
        rows.push_back(row);
    }
    return rows;
}

void write_function_csv(const fs::path& path, const FunctionSample& f) {
    auto out = open_out(path);
    for (double v : f.values()) out << format_double(v) << '\n';
}

FunctionSample read_function_csv(const fs::path& path) {
    std::vector<double> values;
    for (const auto& row : read_numeric_csv(path)) {
        if (row.size() != 1) throw ValidationError(path.string() + ": expected a single column");
        values.push_back(row[0]);
    }
    if (values.empty()) throw ValidationError(path.string() + ": no values");
    const Grid grid(values.size());
    return FunctionSample(grid, std::move(values));
}

void save_dataset(const fs::path& dir, const Dataset& data, const Manifest& manifest) {
    data.validate();
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "y.csv");
        for (double y : data.Y) out << format_double(y) << '\n';
    }
    {
        auto out = open_out(dir / "x.csv");
        for (const auto& x : data.X) {
            const auto v = x.values();
            for (std::size_t p = 0; p < v.size(); ++p) out << (p ? "," : "") << format_double(v[p]);
            out << '\n';
        }
    }
    if (data.index) write_function_csv(dir / "index.csv", *data.index);
    manifest.write(dir / "manifest.txt");
}

Dataset load_dataset(const fs::path& dir) {
    Dataset data;
    for (const auto& row : read_numeric_csv(dir / "y.csv")) {
        if (row.size() != 1) throw ValidationError("y.csv: expected a single column");
        data.Y.push_back(row[0]);
    }
    const auto rows = read_numeric_csv(dir / "x.csv");
    if (rows.empty()) throw ValidationError("x.csv: no curves");
    data.grid = Grid(rows.front().size());
    for (const auto& row : rows) data.X.emplace_back(data.grid, row);
    if (fs::exists(dir / "index.csv")) data.index = read_function_csv(dir / "index.csv");
    if (fs::exists(dir / "manifest.txt")) {
        const Manifest m = Manifest::read(dir / "manifest.txt");
        if (const auto* s = m.find("seed")) data.seed = std::stoull(*s);
    }
    data.validate();
    return data;
}

}  // namespace fepls
