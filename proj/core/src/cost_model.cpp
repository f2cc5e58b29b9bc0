// SPDX-License-Identifier: Apache-2.0

#include "ltprune/cost_model.hpp"

#include <cstdlib>
#include <stdexcept>

#include "ltprune/tensor_io.hpp"
#include "ltprune/text_format.hpp"

namespace ltprune {

namespace {

// NVIDIA A100 dense peak: 312 TFLOP/s FP16, doubling per halved precision.
// 0.9 utilization reproduces the reference prefill latencies.
ModelSpec vicuna_7b(double bytes_per_weight, double peak) {
    ModelSpec spec;
    spec.params = 7.0e9;
    spec.layers = 32;
    spec.d_model = 4096;
    spec.bytes_per_weight = bytes_per_weight;
    spec.peak_throughput = peak;
    spec.hbm_bandwidth = 2.039e12;
    spec.utilization = 0.9;
    spec.c_act = 16.0;
    return spec;
}

}  // namespace

void ModelSpec::validate() const {
    if (!(params > 0.0)) throw std::invalid_argument("params must be positive");
    if (layers == 0) throw std::invalid_argument("layers must be positive");
    if (d_model == 0) throw std::invalid_argument("d_model must be positive");
    if (!(bytes_per_weight > 0.0)) throw std::invalid_argument("bytes_per_weight must be positive");
    if (!(peak_throughput > 0.0)) throw std::invalid_argument("peak_throughput must be positive");
    if (!(hbm_bandwidth > 0.0)) throw std::invalid_argument("hbm_bandwidth must be positive");
    if (!(utilization > 0.0) || utilization > 1.0) {
        throw std::invalid_argument("utilization must be in (0, 1]");
    }
    if (!(c_act > 0.0)) throw std::invalid_argument("c_act must be positive");
}

CostReport estimate(const ModelSpec& spec, std::size_t n_tokens) {
    spec.validate();
    if (n_tokens == 0) {
        throw std::invalid_argument("n_tokens must be at least 1");
    }
    const double n = static_cast<double>(n_tokens);
    const double layers = static_cast<double>(spec.layers);
    const double d_model = static_cast<double>(spec.d_model);

    CostReport report;
    // Linear layers dominate; the n^2 term covers the attention
    // score/context matmuls and matters at long sequence lengths.
    report.flops = 2.0 * spec.params * n + 2.0 * layers * n * n * d_model;
    report.prefill_time = report.flops / (spec.utilization * spec.peak_throughput);
    report.weight_memory = spec.params * spec.bytes_per_weight;
    report.kv_cache_memory = 2.0 * layers * n * d_model * spec.bytes_per_weight;
    report.activation_memory = spec.c_act * n * d_model * layers * spec.bytes_per_weight;
    report.total_memory = report.weight_memory + report.kv_cache_memory + report.activation_memory;
    return report;
}

const std::map<std::string, ModelSpec>& builtin_presets() {
    static const std::map<std::string, ModelSpec> presets = {
        {"vicuna-7b-fp16", vicuna_7b(2.0, 312e12)},
        {"vicuna-7b-int8", vicuna_7b(1.0, 624e12)},
        {"vicuna-7b-int4", vicuna_7b(0.5, 1248e12)},
    };
    return presets;
}

std::optional<ModelSpec> find_preset(const std::string& name) {
    const auto& presets = builtin_presets();
    if (auto it = presets.find(name); it != presets.end()) {
        return it->second;
    }
    if (const char* dir = std::getenv("LTP_PRESET_DIR"); dir != nullptr) {
        std::filesystem::path candidate = std::filesystem::path(dir) / (name + ".preset");
        if (std::filesystem::exists(candidate)) {
            return load_model_spec(candidate);
        }
    }
    return std::nullopt;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
    auto kv = parse_key_value_file(path);
    auto require = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw std::invalid_argument(path.string() + ": missing key '" + key + "'");
        }
        return it->second;
    };
    ModelSpec spec;
    spec.params = parse_double(require("params"));
    spec.layers = parse_size(require("layers"));
    spec.d_model = parse_size(require("d_model"));
    spec.bytes_per_weight = parse_double(require("bytes_per_weight"));
    spec.peak_throughput = parse_double(require("peak_throughput"));
    spec.hbm_bandwidth = parse_double(require("hbm_bandwidth"));
    if (auto it = kv.find("utilization"); it != kv.end()) {
        spec.utilization = parse_double(it->second);
    }
    if (auto it = kv.find("c_act"); it != kv.end()) {
        spec.c_act = parse_double(it->second);
    }
    spec.validate();
    return spec;
}

std::string cost_report_text(const ModelSpec& spec, std::size_t n_tokens,
                             const CostReport& report) {
    std::string out;
    out += "params: " + format_double(spec.params) + "\n";
    out += "layers: " + std::to_string(spec.layers) + "\n";
    out += "d_model: " + std::to_string(spec.d_model) + "\n";
    out += "bytes_per_weight: " + format_double(spec.bytes_per_weight) + "\n";
    out += "peak_throughput_flops: " + format_double(spec.peak_throughput) + "\n";
    out += "hbm_bandwidth_bytes_per_s: " + format_double(spec.hbm_bandwidth) + "\n";
    out += "utilization: " + format_double(spec.utilization) + "\n";
    out += "c_act: " + format_double(spec.c_act) + "\n";
    out += "n_tokens: " + std::to_string(n_tokens) + "\n";
    out += "flops_t: " + format_double(report.flops / 1e12) + "\n";
    out += "prefill_time_ms: " + format_double(report.prefill_time * 1e3) + "\n";
    out += "weight_memory_gb: " + format_double(report.weight_memory / 1e9) + "\n";
    out += "kv_cache_gb: " + format_double(report.kv_cache_memory / 1e9) + "\n";
    out += "activation_gb: " + format_double(report.activation_memory / 1e9) + "\n";
    out += "total_memory_gb: " + format_double(report.total_memory / 1e9) + "\n";
    return out;
}

std::string cost_report_csv(const CostReport& report) {
    std::string out = "metric,value\n";
    out += "flops," + format_double(report.flops) + "\n";
    out += "prefill_time_s," + format_double(report.prefill_time) + "\n";
    out += "weight_memory_bytes," + format_double(report.weight_memory) + "\n";
    out += "kv_cache_bytes," + format_double(report.kv_cache_memory) + "\n";
    out += "activation_bytes," + format_double(report.activation_memory) + "\n";
    out += "total_memory_bytes," + format_double(report.total_memory) + "\n";
    return out;
}

}  // namespace ltprune
