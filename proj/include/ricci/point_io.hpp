#pragma once

#include "ricci/manifolds.hpp"
#include "ricci/provenance.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ricci {

// Fixed 17 significant digits.
std::string format_double(double v);

// CSV with a leading "#" provenance line, a header row, and one point per row.
void write_cloud_csv(const std::string& path, const PointCloud& cloud, const Provenance& prov);
// Writes the JSON sidecar next to the CSV at csv_path + ".json".
void write_cloud_sidecar(const std::string& csv_path, const PointCloud& cloud);
// Reads the CSV and, if present, the JSON sidecar at path + ".json" to restore the oracle tag.
PointCloud read_cloud_csv(const std::string& path);

// Minimal RFC-4180 reader for numeric tables; lines starting with '#' are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

std::string sidecar_path(const std::string& csv_path);

}  // namespace ricci
