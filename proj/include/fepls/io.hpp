#pragma once

// Plain-text file formats: CSV columns and matrices, key-value manifests and
// the on-disk dataset layout (x.csv, y.csv, optional index.csv, manifest.txt).

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fepls/dataset.hpp"
#include "fepls/func_space.hpp"

namespace fepls {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Ordered key-value record, written as "key = value" lines in insertion order.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    void set(const std::string& key, std::size_t value) { set(key, static_cast<long long>(value)); }
    void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }

    const std::string* find(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    void write(const std::filesystem::path& path) const;
    static Manifest read(const std::filesystem::path& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// Columns of equal length under a header row.
void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);
// Rows of numbers; a first line that does not parse as numbers is treated as a header.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path);

// One value per row, no header; the grid is implied by the row count.
void write_function_csv(const std::filesystem::path& path, const FunctionSample& f);
FunctionSample read_function_csv(const std::filesystem::path& path);

void save_dataset(const std::filesystem::path& dir, const Dataset& data, const Manifest& manifest);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace fepls
