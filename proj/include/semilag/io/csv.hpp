#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "semilag/hj.hpp"

namespace semilag::io {

/// Round-trip representation (%.17g); the output files rely on it for
/// byte-identical reruns.
std::string format_real(double v);

/// Minimal CSV builder; cells are written verbatim.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvTable& row() {
        rows_.emplace_back();
        return *this;
    }
    CsvTable& cell(const std::string& s);
    CsvTable& cell(double v) { return cell(format_real(v)); }
    CsvTable& cell(long v) { return cell(std::to_string(v)); }
    CsvTable& cell(int v) { return cell(std::to_string(v)); }

    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// n, t, sup_norm, lipschitz, semiconcavity, xi_radius, min_excess, clamped_feet.
CsvTable step_log(const HjSolution& sol);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace semilag::io
