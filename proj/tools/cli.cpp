#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rbepwt/analysis.hpp"
#include "rbepwt/codec.hpp"
#include "rbepwt/container.hpp"
#include "rbepwt/error.hpp"
#include "rbepwt/roi.hpp"
#include "rbepwt/segmentation.hpp"

namespace rbepwt::cli {

namespace {

std::vector<std::uint32_t> parse_labels(const std::string& text) {
    std::vector<std::uint32_t> labels;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (item.empty() || pos != item.size() || item.front() == '-')
            throw CLI::ValidationError("--roi-labels", "expected comma-separated labels, got '" + text + "'");
        labels.push_back(static_cast<std::uint32_t>(v));
    }
    if (labels.empty()) throw CLI::ValidationError("--roi-labels", "no labels given");
    return labels;
}

Distance parse_distance(const std::string& name) {
    return name == "chebyshev" ? Distance::Chebyshev : Distance::Euclidean;
}

struct Options {
    std::string input, input2, output, seg, path = "easy", wavelet = "cdf97", distance = "euclidean";
    std::string roi_labels, name, encoded;
    SegParams seg_params;
    std::size_t levels = 0, keep = 0, level = 0, index = 0;
    double roi_frac = 0.10, rest_frac = 0.001;
    bool ancestors_only = false, header = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Region based easy path wavelet transform codec", "rbepwt"};
    app.require_subcommand(1);
    Options o;

    auto* segment = app.add_subcommand("segment", "Graph-based segmentation of a PGM into a label map");
    segment->add_option("input", o.input, "Input PGM")->required()->check(CLI::ExistingFile);
    segment->add_option("--k", o.seg_params.k, "Scale parameter")->capture_default_str()->check(CLI::NonNegativeNumber);
    segment->add_option("--sigma", o.seg_params.sigma, "Gaussian presmoothing std-dev (pixels)")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    segment->add_option("--min-size", o.seg_params.min_size, "Minimum region size")->capture_default_str();
    segment->add_option("-o,--output", o.output, "Output label map")->required();

    auto* encode_cmd = app.add_subcommand("encode", "Encode a PGM into an RBE1 container");
    encode_cmd->add_option("input", o.input, "Input PGM")->required()->check(CLI::ExistingFile);
    encode_cmd->add_option("--path", o.path, "Path finder")->capture_default_str()
        ->check(CLI::IsMember({"easy", "grad", "epwt"}));
    encode_cmd->add_option("--wavelet", o.wavelet, "Filter bank")->capture_default_str()
        ->check(CLI::IsMember({"haar", "cdf97"}));
    encode_cmd->add_option("--distance", o.distance, "Path distance")->capture_default_str()
        ->check(CLI::IsMember({"euclidean", "chebyshev"}));
    encode_cmd->add_option("--levels", o.levels, "Transform levels (default: maximum)");
    encode_cmd->add_option("--seg", o.seg, "Label map (required for easy and grad)")->check(CLI::ExistingFile);
    encode_cmd->add_option("-o,--output", o.output, "Output container")->required();

    auto* decode_cmd = app.add_subcommand("decode", "Decode an RBE1 container to PGM");
    decode_cmd->add_option("input", o.input, "Input container")->required()->check(CLI::ExistingFile);
    decode_cmd->add_option("-o,--output", o.output, "Output PGM")->required();

    auto* threshold = app.add_subcommand("threshold", "Keep the N largest coefficients");
    threshold->add_option("input", o.input, "Container, rewritten in place unless -o is given")
        ->required()->check(CLI::ExistingFile);
    threshold->add_option("--keep", o.keep, "Coefficients to keep")->required();
    threshold->add_option("-o,--output", o.output, "Output container");

    auto* roi = app.add_subcommand("roi", "Region-of-interest thresholding (Haar, full levels)");
    roi->add_option("input", o.input, "Container, rewritten in place unless -o is given")
        ->required()->check(CLI::ExistingFile);
    roi->add_option("--roi-labels", o.roi_labels, "Comma-separated region labels")->required();
    auto* roi_frac = roi->add_option("--roi-frac", o.roi_frac, "Fraction of ROI ancestors kept")
        ->capture_default_str()->check(CLI::Range(0.0, 1.0));
    auto* rest_frac = roi->add_option("--rest-frac", o.rest_frac, "Fraction of remaining coefficients kept")
        ->capture_default_str()->check(CLI::Range(0.0, 1.0));
    roi->add_flag("--ancestors-only", o.ancestors_only, "Keep exactly the ROI ancestors")
        ->excludes(roi_frac)->excludes(rest_frac);
    roi->add_option("-o,--output", o.output, "Output container");

    auto* metrics = app.add_subcommand("metrics", "PSNR of a reconstruction against the original");
    metrics->add_option("original", o.input, "Original PGM")->required()->check(CLI::ExistingFile);
    metrics->add_option("reconstruction", o.input2, "Reconstructed PGM")->required()->check(CLI::ExistingFile);
    metrics->add_option("--encoded", o.encoded, "Container that produced the reconstruction")->check(CLI::ExistingFile);
    metrics->add_option("--name", o.name, "Image column (default: original path)");
    metrics->add_flag("--header", o.header, "Print the CSV header first");

    auto* basis = app.add_subcommand("basis", "Decode a single unit coefficient");
    basis->add_option("input", o.input, "Template container")->required()->check(CLI::ExistingFile);
    basis->add_option("--level", o.level, "0 = lowest approximation, l >= 1 = detail level l")->required();
    basis->add_option("--index", o.index, "Index within the vector")->required();
    basis->add_option("-o,--output", o.output, "Output PGM, rescaled to [0, 255]")->required();

    auto* pathdump = app.add_subcommand("path-dump", "Dump one level's path as CSV");
    pathdump->alias("pathdump");
    pathdump->add_option("input", o.input, "Container")->required()->check(CLI::ExistingFile);
    pathdump->add_option("--level", o.level, "Level (1 = lowest, L = finest)")->required();
    pathdump->add_option("-o,--output", o.output, "Output CSV (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (segment->parsed()) {
            const LabelMap lm = fh_segment(load_image(o.input), o.seg_params);
            save_label_map(lm, o.output);
            out << "regions: " << lm.region_count() << "\nperimeter: " << perimeter(lm) << '\n';
        } else if (encode_cmd->parsed()) {
            const GrayImage img = load_image(o.input);
            const PathFinderKind kind{parse_path_mode(o.path), parse_distance(o.distance)};
            LabelMap lm;
            if (!o.seg.empty()) lm = load_label_map(o.seg);
            else if (kind.mode == PathMode::Epwt) lm = LabelMap::single_region(img.width(), img.height());
            else {
                err << "rbepwt encode: --seg is required for --path " << o.path << '\n';
                return kUsageError;
            }
            const std::size_t levels = o.levels ? o.levels : max_levels(img.size());
            save_encoded(encode(img, lm, kind, parse_wavelet(o.wavelet), levels), o.output);
        } else if (decode_cmd->parsed()) {
            save_image(decode(load_encoded(o.input)), o.output);
        } else if (threshold->parsed()) {
            const EncodedImage enc = keep_n_largest(load_encoded(o.input), o.keep);
            save_encoded(enc, o.output.empty() ? o.input : o.output);
        } else if (roi->parsed()) {
            std::vector<std::uint32_t> labels;
            try {
                labels = parse_labels(o.roi_labels);
            } catch (const CLI::ParseError& e) {
                err << "rbepwt roi: " << e.what() << '\n';
                return kUsageError;
            }
            const EncodedImage enc = load_encoded(o.input);
            const EncodedImage result = o.ancestors_only ? keep_ancestors_only(enc, labels)
                                                         : roi_threshold(enc, labels, o.roi_frac, o.rest_frac);
            save_encoded(result, o.output.empty() ? o.input : o.output);
            out << "nonzero: " << count_nonzero(result) << '\n';
        } else if (metrics->parsed()) {
            const GrayImage f = load_image(o.input);
            const GrayImage g = load_image(o.input2);
            MetricsRow row;
            row.image = o.name.empty() ? o.input : o.name;
            if (!o.encoded.empty()) {
                const EncodedImage enc = load_encoded(o.encoded);
                row.mode = path_mode_name(enc.kind.mode);
                row.bank = wavelet_name(enc.bank);
                row.n_coeffs = std::to_string(count_nonzero(enc));
            }
            row.psnr_paper = psnr_paper(f, g);
            row.psnr_std = std::isinf(row.psnr_paper) ? row.psnr_paper : psnr_std(f, g);
            if (o.header) out << kMetricsCsvHeader << '\n';
            out << format_metrics_row(row) << '\n';
        } else if (basis->parsed()) {
            const EncodedImage enc = load_encoded(o.input);
            save_image(rescale_for_display(basis_element(enc, {o.level, o.index})), o.output);
        } else if (pathdump->parsed()) {
            const PointPath path = level_path(load_encoded(o.input), o.level);
            if (o.output.empty()) {
                write_path_csv(path, out);
            } else {
                std::ofstream file(o.output, std::ios::trunc);
                if (!file) fail(ErrorKind::Io, "cannot write " + o.output);
                write_path_csv(path, file);
            }
        }
    } catch (const Error& e) {
        err << "rbepwt: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::Format: return kFormatError;
            case ErrorKind::InvalidArgument:
            case ErrorKind::Precondition: return kPreconditionViolation;
            case ErrorKind::Io: return kRuntimeFailure;
        }
        return kRuntimeFailure;
    } catch (const std::exception& e) {
        err << "rbepwt: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kOk;
}

}  // namespace rbepwt::cli
