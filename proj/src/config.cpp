#include "cellclean/config.hpp"

#include <fstream>

#include "cellclean/ingest.hpp"

namespace cellclean {

std::string_view to_string(TagSource source) {
    switch (source) {
        case TagSource::cellnames: return "cellnames";
        case TagSource::observations: return "observations";
        case TagSource::both: return "both";
    }
    return "both";
}

TagSource parse_tag_source(std::string_view text) {
    if (text == "cellnames") return TagSource::cellnames;
    if (text == "observations") return TagSource::observations;
    if (text == "both") return TagSource::both;
    throw std::invalid_argument("unknown tag source '" + std::string(text) +
                                "' (expected cellnames, observations or both)");
}

CleanOptions PipelineConfig::clean_options() const {
    CleanOptions o;
    o.mode = metric;
    o.prune_dist = distance_in_mode(prune_km, metric);
    o.min_cluster_size = min_cluster_size;
    o.keep_insufficient = keep_insufficient_lacs;
    o.threads = threads;
    return o;
}

void apply_config(std::istream& in, PipelineConfig& cfg, const std::filesystem::path& base_dir) {
    std::string line;
    std::size_t line_no = 0;
    while (csv::read_line(in, line)) {
        ++line_no;
        const auto text = csv::trim(std::string_view(line).substr(0, line.find('#')));
        if (text.empty()) continue;
        const auto where = "config line " + std::to_string(line_no);
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw FormatError(where + ": expected key = value");
        const std::string key(csv::trim(text.substr(0, eq)));
        const auto value = csv::trim(text.substr(eq + 1));
        auto bad = [&] { return FormatError(where + ": bad value '" + std::string(value) + "' for " + key); };
        auto path = [&] {
            std::filesystem::path p{std::string(value)};
            return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        };

        if (key == "min_cluster_size") {
            const auto v = csv::parse_u64(value);
            if (!v || *v == 0) throw bad();
            cfg.min_cluster_size = static_cast<std::size_t>(*v);
        } else if (key == "prune_km") {
            const auto v = csv::parse_double(value);
            if (!v || *v <= 0.0) throw bad();
            cfg.prune_km = *v;
        } else if (key == "osc_window_s") {
            const auto v = csv::parse_double(value);
            if (!v || *v <= 0.0) throw bad();
            cfg.osc_window_s = *v;
        } else if (key == "metric") {
            try {
                cfg.metric = parse_metric(value);
            } catch (const std::invalid_argument&) {
                throw bad();
            }
        } else if (key == "celldb_path") {
            cfg.celldb_path = path();
        } else if (key == "observations_path") {
            cfg.observations_path = path();
        } else if (key == "cellnames_path") {
            cfg.cellnames_path = path();
        } else if (key == "out_dir") {
            cfg.out_dir = path();
        } else if (key == "keep_insufficient_lacs") {
            if (value == "true" || value == "1") cfg.keep_insufficient_lacs = true;
            else if (value == "false" || value == "0") cfg.keep_insufficient_lacs = false;
            else throw bad();
        } else if (key == "threads") {
            const auto v = csv::parse_u32(value);
            if (!v) throw bad();
            cfg.threads = *v;
        } else if (key == "tag_source") {
            try {
                cfg.tag_source = parse_tag_source(value);
            } catch (const std::invalid_argument&) {
                throw bad();
            }
        } else {
            throw FormatError(where + ": unknown key '" + key + "'");
        }
    }
}

void apply_config_file(const std::filesystem::path& file, PipelineConfig& cfg) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config file " + file.string());
    apply_config(in, cfg, file.parent_path());
}

}  // namespace cellclean
