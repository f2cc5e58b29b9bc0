// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace ltprune {

/// Decoder-only transformer plus target accelerator, the inputs of the
/// prefill cost estimate. All fields must be positive.
struct ModelSpec {
    double params = 0.0;            // total parameter count
    std::size_t layers = 0;
    std::size_t d_model = 0;
    double bytes_per_weight = 0.0;  // 2 FP16, 1 INT8, 0.5 INT4
    double peak_throughput = 0.0;   // FLOP/s of the accelerator
    double hbm_bandwidth = 0.0;     // bytes/s, descriptive only for prefill
    /// Fraction of peak the estimate assumes is sustained. The shipped
    /// A100 presets use 0.9.
    double utilization = 1.0;
    /// Activation-memory constant: activations = c_act * n * d_model *
    /// layers * bytes_per_weight. Calibrated, not derived; 16 by default.
    double c_act = 16.0;

    void validate() const;
};

/// Prefill cost at one token count. Raw units: FLOPs, seconds, bytes.
struct CostReport {
    double flops = 0.0;
    double prefill_time = 0.0;
    double total_memory = 0.0;
    double activation_memory = 0.0;
    // components of total_memory
    double weight_memory = 0.0;
    double kv_cache_memory = 0.0;
};

/// flops   = 2 * params * n  +  2 * layers * n^2 * d_model
/// time    = flops / (utilization * peak_throughput)
/// weights = params * bytes_per_weight
/// kv      = 2 * layers * n * d_model * bytes_per_weight
/// act     = c_act * n * d_model * layers * bytes_per_weight
/// total   = weights + kv + act
///
/// The FLOP count is precision-independent; quantization shows up in the
/// memory terms and in the preset's peak throughput, not in flops.
CostReport estimate(const ModelSpec& spec, std::size_t n_tokens);

/// Built-in model presets (vicuna-7b-fp16 / -int8 / -int4 on A100 numbers).
const std::map<std::string, ModelSpec>& builtin_presets();

/// Looks up a preset by name: built-ins first, then "<name>.preset"
/// key=value files under $LTP_PRESET_DIR when that variable is set.
std::optional<ModelSpec> find_preset(const std::string& name);

/// Parses a key=value spec file ('#' comments allowed). Keys: params,
/// layers, d_model, bytes_per_weight, peak_throughput, hbm_bandwidth,
/// utilization, c_act. The last two are optional.
ModelSpec load_model_spec(const std::filesystem::path& path);

std::string cost_report_text(const ModelSpec& spec, std::size_t n_tokens, const CostReport& report);
std::string cost_report_csv(const CostReport& report);

}  // namespace ltprune
