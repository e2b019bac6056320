#include <cstdio>
#include <sstream>
#include <string>

#include "tsr/cli.hpp"
#include "tsr/error.hpp"

namespace tsr::cli {

namespace {

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::array<double, 4> columns(const Scores& s, Averaging avg) {
    if (avg == Averaging::Weighted) return {s.weighted_f1, s.accuracy, s.weighted_precision, s.weighted_recall};
    return {s.macro_f1, s.accuracy, s.macro_precision, s.macro_recall};
}

}  // namespace

ReportFormat parse_format(std::string_view name) {
    if (name == "md") return ReportFormat::Markdown;
    if (name == "csv") return ReportFormat::Csv;
    throw Error(ErrorCode::UnknownFormat, "unknown report format '" + std::string(name) + "' (use md or csv)");
}

std::string format_table(const std::vector<EvalRow>& rows, ReportFormat fmt, Averaging avg) {
    std::string out;
    if (fmt == ReportFormat::Csv) {
        out += kCsvHeader;
        out += '\n';
        for (const EvalRow& r : rows) {
            out += r.method;
            for (double v : columns(r.scores, avg)) out += ";" + fixed6(v);
            out += '\n';
        }
        return out;
    }
    out += "| Method | F1 Score | Accuracy | Precision | Recall |\n";
    out += "|---|---|---|---|---|\n";
    for (const EvalRow& r : rows) {
        out += "| " + r.method;
        for (double v : columns(r.scores, avg)) out += " | " + fixed6(v);
        out += " |\n";
    }
    return out;
}

std::map<std::string, std::array<double, 4>> parse_csv_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw Error(ErrorCode::MissingHeader, "report does not start with '" + std::string(kCsvHeader) + "'");
    std::map<std::string, std::array<double, 4>> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string method, cell;
        std::getline(row, method, ';');
        std::array<double, 4> v{};
        for (double& x : v) {
            if (!std::getline(row, cell, ';'))
                throw Error(ErrorCode::BadFieldCount, "report row '" + line + "' has too few columns");
            x = std::stod(cell);
        }
        out[method] = v;
    }
    return out;
}

}  // namespace tsr::cli
