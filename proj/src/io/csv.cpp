#include "semilag/io/csv.hpp"

#include <cstdio>
#include <fstream>

#include "semilag/errors.hpp"

namespace semilag::io {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable& CsvTable::cell(const std::string& s) {
    if (rows_.empty()) rows_.emplace_back();
    rows_.back().push_back(s);
    return *this;
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

CsvTable step_log(const HjSolution& sol) {
    CsvTable t({"n", "t", "sup_norm", "lipschitz", "semiconcavity", "xi_radius", "min_excess", "clamped_feet"});
    for (const StepStats& s : sol.stats)
        t.row()
            .cell(s.n)
            .cell(s.t)
            .cell(s.sup_norm)
            .cell(s.lipschitz)
            .cell(s.semiconcavity)
            .cell(s.xi_radius)
            .cell(s.min_excess)
            .cell(s.clamped_feet);
    return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
    out << content;
}

}  // namespace semilag::io
