#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "playa/matrix.hpp"

namespace playa {

enum class Split : std::uint8_t { train = 0, validation = 1, test = 2 };

std::string_view split_name(Split s);
Split split_from_name(std::string_view name);

struct YearMonth {
    int year = 0;
    int month = 0; // 1..12

    bool operator==(const YearMonth&) const = default;
};

// Calendar successor (1984-12 -> 1985-01).
YearMonth next_month(YearMonth ym);
// Number of months in the inclusive span [first, last].
int month_span(YearMonth first, YearMonth last);

struct ModelConfig {
    int hidden_size = 128;
    int numeric_features = 0; // always taken from the feature schema
    int embed_playa = 16;
    int embed_huc8 = 8;
    int embed_author = 4;
    int vocab_playa = 0;
    int vocab_huc8 = 0;
    int vocab_author = 0;

    int input_width() const { return numeric_features + embed_playa + embed_huc8 + embed_author; }
    void validate() const; // throws std::invalid_argument
};

// One playa's full monthly record: standardized numeric features, category
// indices, binary inundation labels, and the per-month split tag.
struct SequenceSample {
    std::int64_t playa_id = 0;
    int playa_index = 0;
    int huc8_index = 0;
    int author_index = 0;
    int length = 0;                      // T
    std::vector<double> features;        // T x numeric_features, row-major
    std::vector<std::uint8_t> labels;    // T, 0/1
    std::vector<Split> split;            // T
    std::vector<YearMonth> months;       // T, contiguous, strictly increasing

    double feature(int t, int f, int width) const {
        return features[static_cast<std::size_t>(t) * width + f];
    }
    // Index one past the last timestep tagged with `s`, 0 if none.
    int prefix_length(Split s) const;
    int count_in_split(Split s) const;
};

// All learnable state. LSTM gate blocks are packed row-wise in the fixed
// order [input, forget, cell-candidate, output], each block hidden_size
// rows, in lstm_weight_* and lstm_bias_*.
struct ModelParameters {
    Matrix embed_author;   // vocab_author x embed_author
    Matrix embed_huc8;     // vocab_huc8 x embed_huc8
    Matrix embed_playa;    // vocab_playa x embed_playa
    Matrix head_bias;      // 1 x 1
    Matrix head_weight;    // 1 x hidden_size
    Matrix lstm_bias_hh;   // 4H x 1
    Matrix lstm_bias_ih;   // 4H x 1
    Matrix lstm_weight_hh; // 4H x H
    Matrix lstm_weight_ih; // 4H x input_width

    // Canonical enumeration: sorted by name. Serialization, optimizer state
    // and gradient reductions all walk parameters in this order.
    static constexpr int kCount = 9;
    std::array<std::pair<std::string_view, Matrix*>, kCount> named();
    std::array<std::pair<std::string_view, const Matrix*>, kCount> named() const;

    static ModelParameters zeros_like(const ModelConfig& config);
    bool all_finite() const;
};

// Weights ~ U(-1/sqrt(H), 1/sqrt(H)), embeddings ~ U(-0.1, 0.1), biases zero
// except the forget-gate block of lstm_bias_ih which starts at 1. Draws occur
// in the canonical sorted-name order, row-major within each array, so a given
// (config, seed) pair always yields the same parameters.
ModelParameters init_parameters(const ModelConfig& config, std::uint64_t seed);

// Copy of row `index`; throws std::out_of_range naming `what` and the bound.
std::vector<double> embed_lookup(const Matrix& table, int index, std::string_view what);

struct LstmCellCache {
    std::vector<double> gate_i, gate_f, gate_g, gate_o; // post-activation
    std::vector<double> cell, cell_tanh, hidden;
};

// Single transition: gates from W_ih x + b_ih + W_hh h_prev + b_hh, then
// c = f*c_prev + i*g, h = o*tanh(c).
LstmCellCache lstm_cell_forward(const std::vector<double>& input,
                                const std::vector<double>& h_prev,
                                const std::vector<double>& c_prev,
                                const ModelParameters& params,
                                const ModelConfig& config);

// Everything backward needs, laid out per processed timestep.
struct ForwardCache {
    int steps = 0;
    int hidden = 0;
    int input_width = 0;
    std::vector<double> input;     // steps x input_width (numeric + embeddings)
    std::vector<double> gate_i, gate_f, gate_g, gate_o; // steps x H
    std::vector<double> cell, cell_tanh, hidden_state;  // steps x H
    std::vector<double> logits;    // steps

    double prob(int t) const;
};

// Runs the cell over timesteps [0, max_steps) with h0 = c0 = 0; per step the
// input is the standardized numeric row concatenated with the three embedding
// vectors, and logit_t = head_weight . h_t + head_bias. max_steps < 0 means
// the full sequence.
ForwardCache sequence_forward(const SequenceSample& sample,
                              const ModelParameters& params,
                              const ModelConfig& config,
                              int max_steps = -1);

struct SequenceLoss {
    double loss = 0.0;
    ModelParameters grads;
};

// Mean binary cross entropy over processed timesteps tagged `loss_split`,
// with full backpropagation through time over the processed window.
// Gradients cover every parameter, embedding rows included. Throws
// std::runtime_error("empty loss window") when no timestep matches.
SequenceLoss sequence_backward(const ForwardCache& cache,
                               const SequenceSample& sample,
                               Split loss_split,
                               const ModelParameters& params,
                               const ModelConfig& config);

// Accumulation form used by the training loop: adds unnormalized gradients
// (d loss_sum / d theta, loss_sum = plain sum of per-step BCE) into `grads`
// and returns {bce sum, step count} for pooled batch averaging.
struct LossSum {
    double sum = 0.0;
    long long count = 0;
};
LossSum sequence_backward_accumulate(const ForwardCache& cache,
                                     const SequenceSample& sample,
                                     Split loss_split,
                                     const ModelParameters& params,
                                     const ModelConfig& config,
                                     ModelParameters& grads);

// BCE sum over timesteps of `sample` tagged `loss_split`, forward only.
LossSum sequence_loss_sum(const SequenceSample& sample,
                          const ModelParameters& params,
                          const ModelConfig& config,
                          Split loss_split);

} // namespace playa
