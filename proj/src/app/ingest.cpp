#include "tailrisk/app/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tailrisk::app {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

// Column index by header name; npos when absent.
std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::string::npos;
}

enum class CellKind { Value, Missing, Malformed };

CellKind parse_cell(const std::string& token, double& out) {
    if (detail::is_missing_token(token)) return CellKind::Missing;
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin || *end != '\0') return CellKind::Malformed;
    if (!std::isfinite(out)) return CellKind::Missing;
    return CellKind::Value;
}

}  // namespace

namespace detail {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (char c : line) {
        if (c == '"') {
            in_quotes = !in_quotes;
        } else if (c == ',' && !in_quotes) {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(trim(current));
    return fields;
}

bool is_missing_token(const std::string& token) {
    return token.empty() || token == "NA" || token == "NaN" ||
           token == "nan" || token == ".";
}

}  // namespace detail

ColumnSpec parse_columns(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, ',')) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) {
        throw ConfigError("--columns expects 'x,y' or 'x,y,id', got '" + text +
                          "'");
    }
    ColumnSpec spec;
    spec.x = parts[0];
    spec.y = parts[1];
    if (parts.size() == 3) spec.id = parts[2];
    if (spec.x.empty() || spec.y.empty()) {
        throw ConfigError("column names in '" + text + "' must be non-empty");
    }
    return spec;
}

InputTable ingest_csv(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file '" + path + "'");

    InputTable table;
    table.path = path;

    std::string line;
    std::vector<std::string> header;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = detail::split_csv_line(line);
            break;
        }
    }
    if (header.empty()) {
        throw InputError("input file '" + path + "' has no header line");
    }

    auto require_column = [&](const std::string& name) {
        std::size_t idx = find_column(header, name);
        if (idx == std::string::npos) {
            std::ostringstream msg;
            msg << "column '" << name << "' not found in '" << path
                << "' (header has:";
            for (const std::string& h : header) msg << " '" << h << "'";
            msg << ")";
            throw InputError(msg.str());
        }
        return idx;
    };
    std::size_t ix = require_column(options.columns.x);
    std::size_t iy = require_column(options.columns.y);
    std::size_t iid = std::string::npos;
    if (!options.columns.id.empty()) iid = require_column(options.columns.id);

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++table.rows_read;
        std::vector<std::string> fields = detail::split_csv_line(line);
        std::size_t needed = std::max(ix, iy);
        if (iid != std::string::npos) needed = std::max(needed, iid);
        if (fields.size() <= needed) {
            if (options.strict) {
                std::ostringstream msg;
                msg << path << ":" << line_no << ": row has " << fields.size()
                    << " fields, need at least " << needed + 1;
                throw InputError(msg.str());
            }
            ++table.rows_dropped;
            continue;
        }

        double xv = 0.0;
        double yv = 0.0;
        CellKind kx = parse_cell(fields[ix], xv);
        CellKind ky = parse_cell(fields[iy], yv);
        if (options.strict &&
            (kx == CellKind::Malformed || ky == CellKind::Malformed)) {
            const std::string& bad =
                kx == CellKind::Malformed ? fields[ix] : fields[iy];
            std::ostringstream msg;
            msg << path << ":" << line_no << ": cannot parse '" << bad
                << "' as a number";
            throw InputError(msg.str());
        }
        if (kx != CellKind::Value || ky != CellKind::Value) {
            ++table.rows_dropped;
            continue;
        }
        table.x.push_back(xv);
        table.y.push_back(yv);
        if (iid != std::string::npos) table.ids.push_back(fields[iid]);
    }
    return table;
}

}  // namespace tailrisk::app
