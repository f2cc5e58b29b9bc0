// SPDX-License-Identifier: Apache-2.0
//
// ltprune command line: per-stage pruning runs, the full pipeline, prefill
// cost estimates and figure-style outputs (similarity curves, patch masks).
//
// Exit codes: 0 success, 1 computation error, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ltprune/cost_model.hpp"
#include "ltprune/eviction.hpp"
#include "ltprune/pipeline.hpp"
#include "ltprune/segmentation.hpp"
#include "ltprune/similarity.hpp"
#include "ltprune/tensor_io.hpp"
#include "ltprune/text_format.hpp"
#include "ltprune/viz.hpp"

namespace {

using namespace ltprune;

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw io_error("cannot open file for writing: " + path.string());
    }
    os << text;
    if (!os) {
        throw io_error("write failed: " + path.string());
    }
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& grid) {
    auto x = grid.find('x');
    if (x == std::string::npos) {
        throw std::invalid_argument("grid must be WxH, got '" + grid + "'");
    }
    std::size_t w = parse_size(grid.substr(0, x));
    std::size_t h = parse_size(grid.substr(x + 1));
    if (w == 0 || h == 0) {
        throw std::invalid_argument("grid dimensions must be positive, got '" + grid + "'");
    }
    return {w, h};
}

struct PruneArgs {
    std::string cls_path;
    std::string visual_path;
    double alpha = 0.24;
    std::string mode = "multiply";
    std::string mask_out = "stage1_mask.txt";
    std::string curve_out = "split_objective.csv";
};

int run_prune(const PruneArgs& args) {
    EmbeddingMatrix cls = load_matrix(args.cls_path, Role::cls);
    EmbeddingMatrix visual = load_matrix(args.visual_path, Role::visual);
    SimilarityCurve curve = sort_descending(cls_similarity(cls, visual));
    SplitResult split = compute_split(curve, args.alpha, parse_smoothing_mode(args.mode));
    if (split.flat) {
        std::cerr << "warning: flat similarity curve, no split signal; keeping all "
                  << curve.size() << " tokens\n";
    }
    IndexMask mask = stage1_mask(curve, split.kept_count);
    save_mask(mask, args.mask_out);
    write_text_file(args.curve_out, split_result_csv(split));
    std::cout << "kept " << mask.kept.size() << " of " << mask.total << " visual tokens";
    if (!split.flat) {
        std::cout << " (i*=" << split.i_star << ", alpha=" << format_double(split.alpha)
                  << ", mode=" << to_string(split.mode) << ")";
    }
    std::cout << "\n";
    return 0;
}

struct EvictArgs {
    std::string tokens_path;
    std::optional<std::size_t> boundary;
    std::optional<std::size_t> heavy;
    std::optional<std::size_t> recent;
    std::optional<std::size_t> budget;
    double heavy_ratio = 0.5;
    double recent_ratio = 0.5;
    bool exclude_self = false;
    std::string mask_out = "stage2_mask.txt";
    std::string log_out = "eviction_log.csv";
};

EvictionConfig resolve_evict_budgets(const EvictArgs& args, std::size_t length) {
    EvictionConfig config;
    if (args.heavy) {
        config.heavy_budget = *args.heavy;
        config.recent_budget = args.recent.value_or(0);
        config.validate();
    } else if (args.recent) {
        throw std::invalid_argument("--recent requires --heavy (or use --budget with ratios)");
    } else {
        std::size_t budget = args.budget ? *args.budget
                                         : static_cast<std::size_t>(std::llround(
                                               0.5 * static_cast<double>(length)));
        config = EvictionConfig::from_ratios(args.heavy_ratio, args.recent_ratio, budget);
    }
    config.include_self = !args.exclude_self;
    return config;
}

int run_evict(const EvictArgs& args) {
    EmbeddingMatrix tokens = load_matrix(args.tokens_path, Role::text);
    std::size_t boundary = args.boundary.value_or(tokens.rows);
    EvictionConfig config = resolve_evict_budgets(args, tokens.rows);
    StreamResult result = run_stream(tokens, boundary, config);
    save_mask(result.mask, args.mask_out);
    write_text_file(args.log_out, eviction_log_csv(result.state));
    std::cout << "kept " << result.mask.kept.size() << " of " << result.mask.total
              << " tokens (heavy=" << config.heavy_budget << ", recent=" << config.recent_budget
              << ", evictions=" << result.state.evicted.size() << ")\n";
    return 0;
}

struct PipelineArgs {
    std::string cls_path;
    std::string visual_path;
    std::string text_path;
    std::string config_path;
    std::string projection_path;
    std::optional<double> alpha;
    std::optional<std::string> mode;
    std::optional<std::size_t> heavy;
    std::optional<std::size_t> recent;
    std::optional<std::size_t> budget;
    std::optional<double> heavy_ratio;
    std::optional<double> recent_ratio;
    bool exclude_self = false;
    std::string report_out = "report.txt";
    std::string report_csv_out = "report.csv";
    std::string stage1_out = "stage1_mask.txt";
    std::string stage2_out = "stage2_mask.txt";
};

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key + "': expected true/false, got '" + value +
                                "'");
}

PipelineConfig build_pipeline_config(const PipelineArgs& args) {
    PipelineConfig config;
    std::optional<std::size_t> heavy;
    std::optional<std::size_t> recent;

    if (!args.config_path.empty()) {
        auto kv = parse_key_value_file(args.config_path);
        for (const auto& [key, value] : kv) {
            if (key == "alpha") {
                config.alpha = parse_double(value);
            } else if (key == "mode") {
                config.smoothing = parse_smoothing_mode(value);
            } else if (key == "heavy_ratio") {
                config.heavy_ratio = parse_double(value);
            } else if (key == "recent_ratio") {
                config.recent_ratio = parse_double(value);
            } else if (key == "budget") {
                config.cache_budget = parse_size(value);
            } else if (key == "heavy") {
                heavy = parse_size(value);
            } else if (key == "recent") {
                recent = parse_size(value);
            } else if (key == "include_self") {
                config.include_self = parse_bool(value, key);
            } else if (key == "projection") {
                config.projection = load_matrix(value, Role::projection);
            } else {
                throw std::invalid_argument(args.config_path + ": unknown config key '" + key +
                                            "'");
            }
        }
    }

    if (args.alpha) config.alpha = *args.alpha;
    if (args.mode) config.smoothing = parse_smoothing_mode(*args.mode);
    if (args.heavy) heavy = *args.heavy;
    if (args.recent) recent = *args.recent;
    if (args.budget) config.cache_budget = *args.budget;
    if (args.heavy_ratio) config.heavy_ratio = *args.heavy_ratio;
    if (args.recent_ratio) config.recent_ratio = *args.recent_ratio;
    if (args.exclude_self) config.include_self = false;
    if (!args.projection_path.empty()) {
        config.projection = load_matrix(args.projection_path, Role::projection);
    }

    if (heavy) {
        EvictionConfig eviction;
        eviction.heavy_budget = *heavy;
        eviction.recent_budget = recent.value_or(0);
        eviction.validate();
        config.eviction = eviction;
    } else if (recent) {
        throw std::invalid_argument("explicit 'recent' budget requires 'heavy' as well");
    }
    return config;
}

int run_pipeline_cmd(const PipelineArgs& args) {
    EmbeddingMatrix cls = load_matrix(args.cls_path, Role::cls);
    EmbeddingMatrix visual = load_matrix(args.visual_path, Role::visual);
    std::optional<EmbeddingMatrix> text;
    if (!args.text_path.empty()) {
        text = load_matrix(args.text_path, Role::text);
    }
    PipelineConfig config = build_pipeline_config(args);
    PipelineReport report = run_pipeline(cls, visual, text ? &*text : nullptr, config);

    save_mask(report.stage1_mask, args.stage1_out);
    save_mask(report.stage2_mask, args.stage2_out);
    write_text_file(args.report_out, token_accounting_text(report));
    write_text_file(args.report_csv_out, token_accounting_csv(report));
    std::cout << token_accounting_text(report);
    return 0;
}

struct CostArgs {
    std::string preset;
    std::string spec_path;
    std::size_t tokens = 0;
    std::string csv_out;
    std::optional<double> params;
    std::optional<std::size_t> layers;
    std::optional<std::size_t> d_model;
    std::optional<double> bytes_per_weight;
    std::optional<double> peak;
    std::optional<double> bandwidth;
    std::optional<double> utilization;
    std::optional<double> c_act;
};

int run_cost(const CostArgs& args) {
    ModelSpec spec;
    if (!args.preset.empty()) {
        auto found = find_preset(args.preset);
        if (!found) {
            throw io_error("unknown preset '" + args.preset +
                           "' (not built in, not found under LTP_PRESET_DIR)");
        }
        spec = *found;
    } else if (!args.spec_path.empty()) {
        spec = load_model_spec(args.spec_path);
    } else {
        spec = builtin_presets().at("vicuna-7b-fp16");
    }
    if (args.params) spec.params = *args.params;
    if (args.layers) spec.layers = *args.layers;
    if (args.d_model) spec.d_model = *args.d_model;
    if (args.bytes_per_weight) spec.bytes_per_weight = *args.bytes_per_weight;
    if (args.peak) spec.peak_throughput = *args.peak;
    if (args.bandwidth) spec.hbm_bandwidth = *args.bandwidth;
    if (args.utilization) spec.utilization = *args.utilization;
    if (args.c_act) spec.c_act = *args.c_act;

    CostReport report = estimate(spec, args.tokens);
    std::cout << cost_report_text(spec, args.tokens, report);
    if (!args.csv_out.empty()) {
        write_text_file(args.csv_out, cost_report_csv(report));
    }
    return 0;
}

struct AnalyzeArgs {
    std::string cls_path;
    std::string visual_path;
    std::string csv_out = "similarity_curve.csv";
};

int run_analyze(const AnalyzeArgs& args) {
    EmbeddingMatrix cls = load_matrix(args.cls_path, Role::cls);
    EmbeddingMatrix visual = load_matrix(args.visual_path, Role::visual);
    SimilarityCurve curve = sort_descending(cls_similarity(cls, visual));

    std::string csv = "rank,similarity,original_index\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        csv += std::to_string(i + 1);
        csv += ',';
        csv += format_double(curve.values[i]);
        csv += ',';
        csv += std::to_string(curve.source_index[i]);
        csv += '\n';
    }
    write_text_file(args.csv_out, csv);
    std::cout << "wrote " << curve.size() << " ranks to " << args.csv_out << "\n";
    return 0;
}

struct VizArgs {
    std::string mask_path;
    std::string grid;
    std::string patch_image;
    std::string out = "mask.pgm";
};

int run_viz(const VizArgs& args) {
    IndexMask mask = load_mask(args.mask_path);
    auto [grid_w, grid_h] = parse_grid(args.grid);
    GrayImage image;
    if (!args.patch_image.empty()) {
        GrayImage source = read_pgm(args.patch_image);
        image = apply_mask_to_image(mask, grid_w, grid_h, source);
    } else {
        image = render_mask(mask, grid_w, grid_h);
    }
    write_pgm(image, args.out);
    std::cout << "wrote " << image.width << "x" << image.height << " PGM to " << args.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"long-tail token pruning toolkit"};
    app.require_subcommand(1);

    PruneArgs prune_args;
    auto* prune = app.add_subcommand(
        "prune", "stage 1: split the CLS-similarity long tail and write the retention mask");
    prune->add_option("cls", prune_args.cls_path, "CLS embedding file (1 x d)")->required();
    prune->add_option("visual", prune_args.visual_path, "visual embeddings file (n x d)")
        ->required();
    prune->add_option("--alpha", prune_args.alpha, "smoothing coefficient (default 0.24)");
    prune->add_option("--mode", prune_args.mode, "smoothing mode")
        ->check(CLI::IsMember({"multiply", "identity", "expand"}));
    prune->add_option("--mask", prune_args.mask_out, "output mask path");
    prune->add_option("--curve", prune_args.curve_out, "output objective CSV path");

    EvictArgs evict_args;
    auto* evict = app.add_subcommand(
        "evict", "stage 2: stream tokens through heavy/recent-budget eviction");
    evict->add_option("tokens", evict_args.tokens_path, "token embeddings file (L x d)")
        ->required();
    evict->add_option("--boundary", evict_args.boundary,
                      "index of the first text token (default: all visual)");
    auto* heavy_opt = evict->add_option("--heavy", evict_args.heavy, "heavy budget N");
    evict->add_option("--recent", evict_args.recent, "recent budget M (default 0)");
    auto* budget_opt = evict->add_option("--budget", evict_args.budget,
                                         "cache budget for ratio mode (default L/2)");
    evict->add_option("--heavy-ratio", evict_args.heavy_ratio, "heavy fraction of budget");
    evict->add_option("--recent-ratio", evict_args.recent_ratio, "recent fraction of budget");
    evict->add_flag("--exclude-self", evict_args.exclude_self,
                    "do not seed scores with the self-attention weight");
    evict->add_option("--mask", evict_args.mask_out, "output mask path");
    evict->add_option("--log", evict_args.log_out, "output eviction log CSV path");
    heavy_opt->excludes(budget_opt);
    budget_opt->excludes(heavy_opt);

    PipelineArgs pipeline_args;
    auto* pipeline = app.add_subcommand("pipeline", "full two-stage run with token accounting");
    pipeline->add_option("cls", pipeline_args.cls_path, "CLS embedding file")->required();
    pipeline->add_option("visual", pipeline_args.visual_path, "visual embeddings file")
        ->required();
    pipeline->add_option("text", pipeline_args.text_path, "text embeddings file (optional)");
    pipeline->add_option("--config", pipeline_args.config_path, "key=value config file");
    pipeline->add_option("--alpha", pipeline_args.alpha, "smoothing coefficient");
    pipeline->add_option("--mode", pipeline_args.mode, "smoothing mode")
        ->check(CLI::IsMember({"multiply", "identity", "expand"}));
    pipeline->add_option("--heavy", pipeline_args.heavy, "explicit heavy budget N");
    pipeline->add_option("--recent", pipeline_args.recent, "explicit recent budget M");
    pipeline->add_option("--budget", pipeline_args.budget, "cache budget for ratio mode");
    pipeline->add_option("--heavy-ratio", pipeline_args.heavy_ratio, "heavy fraction of budget");
    pipeline->add_option("--recent-ratio", pipeline_args.recent_ratio,
                         "recent fraction of budget");
    pipeline->add_flag("--exclude-self", pipeline_args.exclude_self,
                       "do not seed scores with the self-attention weight");
    pipeline->add_option("--projection", pipeline_args.projection_path,
                         "projection matrix file (d_vis x d_txt)");
    pipeline->add_option("--report", pipeline_args.report_out, "output report text path");
    pipeline->add_option("--report-csv", pipeline_args.report_csv_out, "output report CSV path");
    pipeline->add_option("--stage1-mask", pipeline_args.stage1_out, "output stage-1 mask path");
    pipeline->add_option("--stage2-mask", pipeline_args.stage2_out, "output stage-2 mask path");

    CostArgs cost_args;
    auto* cost = app.add_subcommand("cost", "prefill FLOPs/latency/memory estimate");
    cost->add_option("--preset", cost_args.preset,
                     "model preset (vicuna-7b-fp16/-int8/-int4 or $LTP_PRESET_DIR)");
    cost->add_option("--spec", cost_args.spec_path, "key=value model spec file");
    cost->add_option("--tokens", cost_args.tokens, "input token count")->required();
    cost->add_option("--csv", cost_args.csv_out, "also write the report as CSV");
    cost->add_option("--params", cost_args.params, "override: total parameter count");
    cost->add_option("--layers", cost_args.layers, "override: decoder layer count");
    cost->add_option("--d-model", cost_args.d_model, "override: model width");
    cost->add_option("--bytes-per-weight", cost_args.bytes_per_weight,
                     "override: 2 FP16, 1 INT8, 0.5 INT4");
    cost->add_option("--peak", cost_args.peak, "override: accelerator peak FLOP/s");
    cost->add_option("--bandwidth", cost_args.bandwidth, "override: HBM bytes/s");
    cost->add_option("--utilization", cost_args.utilization, "override: sustained fraction");
    cost->add_option("--c-act", cost_args.c_act, "override: activation memory constant");

    AnalyzeArgs analyze_args;
    auto* analyze =
        app.add_subcommand("analyze", "write the descending similarity curve as CSV");
    analyze->add_option("cls", analyze_args.cls_path, "CLS embedding file")->required();
    analyze->add_option("visual", analyze_args.visual_path, "visual embeddings file")
        ->required();
    analyze->add_option("--out", analyze_args.csv_out, "output CSV path");

    VizArgs viz_args;
    auto* viz = app.add_subcommand("viz", "render a retention mask as a patch-grid PGM");
    viz->add_option("mask", viz_args.mask_path, "mask file")->required();
    viz->add_option("--grid", viz_args.grid, "patch grid as WxH, W*H = mask total")->required();
    viz->add_option("--patch-image", viz_args.patch_image,
                    "PGM to overlay; kept patches keep pixels, pruned turn grey");
    viz->add_option("--out", viz_args.out, "output PGM path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(prune)) return run_prune(prune_args);
        if (app.got_subcommand(evict)) return run_evict(evict_args);
        if (app.got_subcommand(pipeline)) return run_pipeline_cmd(pipeline_args);
        if (app.got_subcommand(cost)) return run_cost(cost_args);
        if (app.got_subcommand(analyze)) return run_analyze(analyze_args);
        if (app.got_subcommand(viz)) return run_viz(viz_args);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
