#include "tsr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "tsr/error.hpp"
#include "tsr/parallel.hpp"
#include "tsr/rng.hpp"

namespace fs = std::filesystem;

namespace tsr {

namespace {

constexpr std::string_view kColumns[] = {"Filename", "Width",   "Height",  "Roi.X1",
                                         "Roi.Y1",   "Roi.X2", "Roi.Y2", "ClassId"};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t semi = line.find(';', start);
        fields.push_back(line.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    return fields;
}

void strip_cr(std::string& line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
}

std::string row_tag(std::size_t line_no) { return "row " + std::to_string(line_no); }

int parse_int(std::string_view field, std::size_t line_no, std::string_view column) {
    int v = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || end != field.data() + field.size() || field.empty())
        throw Error(ErrorCode::NonNumericField,
                    row_tag(line_no) + ", column " + std::string(column) + ": '" + std::string(field) + "'");
    return v;
}

std::string class_dir_name(int id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05d", id);
    return buf;
}

// Decodes a batch of (path, annotation) jobs in parallel, keeping job order
// and collecting every failure before aborting.
std::vector<LabeledSample> decode_all(const std::vector<std::pair<fs::path, Annotation>>& jobs,
                                      const LoadOptions& opts) {
    std::vector<LabeledSample> out(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(
        jobs.size(),
        [&](std::size_t i) {
            try {
                out[i] = load_sample(jobs[i].first, jobs[i].second, opts.roi_crop);
            } catch (const std::exception& e) {
                errors[i] = jobs[i].first.string() + ": " + e.what();
            }
        },
        opts.threads);

    std::string report;
    std::size_t failed = 0;
    for (const auto& e : errors)
        if (!e.empty()) {
            ++failed;
            report += "\n  " + e;
        }
    if (failed > 0)
        throw Error(ErrorCode::DecodeFailures, std::to_string(failed) + " file(s) failed to load:" + report);
    return out;
}

}  // namespace

std::vector<Annotation> parse_annotation_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MissingHeader, "annotation CSV is empty");
    strip_cr(line);
    const auto header = split_fields(line);
    bool header_ok = header.size() == std::size(kColumns);
    for (std::size_t i = 0; header_ok && i < header.size(); ++i) header_ok = header[i] == kColumns[i];
    if (!header_ok) throw Error(ErrorCode::MissingHeader, "first line is not the GTSRB header: '" + line + "'");

    std::vector<Annotation> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != std::size(kColumns))
            throw Error(ErrorCode::BadFieldCount,
                        row_tag(line_no) + " has " + std::to_string(f.size()) + " fields, expected 8");
        Annotation a;
        a.filename = std::string(f[0]);
        a.width = parse_int(f[1], line_no, kColumns[1]);
        a.height = parse_int(f[2], line_no, kColumns[2]);
        a.x1 = parse_int(f[3], line_no, kColumns[3]);
        a.y1 = parse_int(f[4], line_no, kColumns[4]);
        a.x2 = parse_int(f[5], line_no, kColumns[5]);
        a.y2 = parse_int(f[6], line_no, kColumns[6]);
        a.class_id = parse_int(f[7], line_no, kColumns[7]);
        if (a.x1 < 0 || a.x1 >= a.x2 || a.x2 > a.width || a.y1 < 0 || a.y1 >= a.y2 || a.y2 > a.height)
            throw Error(ErrorCode::RoiOutOfBounds, row_tag(line_no) + ": ROI outside the image");
        if (a.class_id < 0 || a.class_id >= kNumClasses)
            throw Error(ErrorCode::LabelOutOfRange,
                        row_tag(line_no) + ": class id " + std::to_string(a.class_id) + " not in [0, 42]");
        rows.push_back(std::move(a));
    }
    return rows;
}

std::vector<Annotation> read_annotation_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    try {
        return parse_annotation_csv(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

std::vector<fs::path> class_directories(const fs::path& root) {
    if (!fs::is_directory(root)) throw Error(ErrorCode::NoClassDirectories, root.string() + " is not a directory");
    int highest = -1;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() != 5 || name.find_first_not_of("0123456789") != std::string::npos) continue;
        const int id = std::stoi(name);
        if (id < kNumClasses) highest = std::max(highest, id);
    }
    if (highest < 0) throw Error(ErrorCode::NoClassDirectories, "no class directories under " + root.string());

    std::vector<fs::path> dirs;
    for (int id = 0; id <= highest; ++id) {
        const fs::path dir = root / class_dir_name(id);
        if (!fs::is_directory(dir)) throw Error(ErrorCode::MissingClassDirectory, dir.string());
        dirs.push_back(dir);
    }
    return dirs;
}

LabeledSample load_sample(const fs::path& file, const Annotation& ann, bool roi_crop) {
    Image img = read_ppm(file.string());
    if (img.color_space() == ColorSpace::Gray) img = gray_to_bgr(img);
    if (roi_crop) img = crop(img, ann.x1, ann.y1, ann.x2, ann.y2);
    return {resize_bilinear(img, kSampleSize, kSampleSize), ann.class_id};
}

std::vector<LabeledSample> load_training_pool(const fs::path& root, const LoadOptions& opts) {
    std::vector<std::pair<fs::path, Annotation>> jobs;
    for (const fs::path& dir : class_directories(root)) {
        const fs::path csv = dir / ("GT-" + dir.filename().string() + ".csv");
        if (!fs::exists(csv)) throw Error(ErrorCode::IoError, "missing annotation file " + csv.string());
        if (fs::file_size(csv) == 0) continue;  // class with no annotated images
        for (Annotation& a : read_annotation_csv(csv)) jobs.emplace_back(dir / a.filename, std::move(a));
    }
    return decode_all(jobs, opts);
}

std::vector<LabeledSample> load_test_set(const fs::path& root, const fs::path& gt_csv, const LoadOptions& opts) {
    std::vector<std::pair<fs::path, Annotation>> jobs;
    for (Annotation& a : read_annotation_csv(gt_csv)) jobs.emplace_back(root / a.filename, std::move(a));
    return decode_all(jobs, opts);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> shuffle_split_indices(std::size_t n,
                                                                                    const SplitConfig& cfg) {
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
        throw Error(ErrorCode::InvalidConfig, "train_fraction must lie in (0, 1)");
    if (n < 2) throw Error(ErrorCode::TooFewSamples, "shuffle_split needs at least 2 samples");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    XorShift64Star rng(cfg.seed);
    shuffle(std::span<std::size_t>(order), rng);
    const auto cut = static_cast<std::size_t>(std::floor(cfg.train_fraction * static_cast<double>(n)));
    return {std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut)),
            std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end())};
}

}  // namespace tsr
