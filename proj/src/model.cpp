#include "playa/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "playa/rng.hpp"

namespace playa {

std::string_view split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
    }
    return "?";
}

Split split_from_name(std::string_view name) {
    if (name == "train") return Split::train;
    if (name == "validation") return Split::validation;
    if (name == "test") return Split::test;
    throw std::invalid_argument("unknown split name: " + std::string(name));
}

YearMonth next_month(YearMonth ym) {
    if (ym.month == 12) return {ym.year + 1, 1};
    return {ym.year, ym.month + 1};
}

int month_span(YearMonth first, YearMonth last) {
    return (last.year - first.year) * 12 + (last.month - first.month) + 1;
}

void ModelConfig::validate() const {
    auto positive = [](int v, const char* what) {
        if (v < 1) throw std::invalid_argument(std::string("ModelConfig: ") + what + " must be >= 1");
    };
    positive(hidden_size, "hidden_size");
    positive(numeric_features, "numeric_features");
    positive(embed_playa, "embed_playa");
    positive(embed_huc8, "embed_huc8");
    positive(embed_author, "embed_author");
    positive(vocab_playa, "vocab_playa");
    positive(vocab_huc8, "vocab_huc8");
    positive(vocab_author, "vocab_author");
}

int SequenceSample::prefix_length(Split s) const {
    for (int t = length; t > 0; --t)
        if (split[t - 1] == s) return t;
    return 0;
}

int SequenceSample::count_in_split(Split s) const {
    int n = 0;
    for (Split tag : split)
        if (tag == s) ++n;
    return n;
}

std::array<std::pair<std::string_view, Matrix*>, ModelParameters::kCount>
ModelParameters::named() {
    return {{{"embed_author", &embed_author},
             {"embed_huc8", &embed_huc8},
             {"embed_playa", &embed_playa},
             {"head_bias", &head_bias},
             {"head_weight", &head_weight},
             {"lstm_bias_hh", &lstm_bias_hh},
             {"lstm_bias_ih", &lstm_bias_ih},
             {"lstm_weight_hh", &lstm_weight_hh},
             {"lstm_weight_ih", &lstm_weight_ih}}};
}

std::array<std::pair<std::string_view, const Matrix*>, ModelParameters::kCount>
ModelParameters::named() const {
    return {{{"embed_author", &embed_author},
             {"embed_huc8", &embed_huc8},
             {"embed_playa", &embed_playa},
             {"head_bias", &head_bias},
             {"head_weight", &head_weight},
             {"lstm_bias_hh", &lstm_bias_hh},
             {"lstm_bias_ih", &lstm_bias_ih},
             {"lstm_weight_hh", &lstm_weight_hh},
             {"lstm_weight_ih", &lstm_weight_ih}}};
}

ModelParameters ModelParameters::zeros_like(const ModelConfig& c) {
    ModelParameters p;
    p.embed_author = Matrix(c.vocab_author, c.embed_author);
    p.embed_huc8 = Matrix(c.vocab_huc8, c.embed_huc8);
    p.embed_playa = Matrix(c.vocab_playa, c.embed_playa);
    p.head_bias = Matrix(1, 1);
    p.head_weight = Matrix(1, c.hidden_size);
    p.lstm_bias_hh = Matrix(4 * c.hidden_size, 1);
    p.lstm_bias_ih = Matrix(4 * c.hidden_size, 1);
    p.lstm_weight_hh = Matrix(4 * c.hidden_size, c.hidden_size);
    p.lstm_weight_ih = Matrix(4 * c.hidden_size, c.input_width());
    return p;
}

bool ModelParameters::all_finite() const {
    for (auto [name, m] : named())
        if (!m->all_finite()) return false;
    return true;
}

ModelParameters init_parameters(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    ModelParameters p = ModelParameters::zeros_like(config);
    const int h = config.hidden_size;
    const double bound = 1.0 / std::sqrt(static_cast<double>(h));
    Rng rng(seed);
    for (auto [name, m] : p.named()) {
        if (name == "embed_author" || name == "embed_huc8" || name == "embed_playa") {
            for (double& v : m->data) v = rng.uniform(-0.1, 0.1);
        } else if (name == "head_weight" || name == "lstm_weight_hh" || name == "lstm_weight_ih") {
            for (double& v : m->data) v = rng.uniform(-bound, bound);
        } else if (name == "lstm_bias_ih") {
            // forget-gate block starts open
            for (int i = h; i < 2 * h; ++i) m->data[i] = 1.0;
        }
        // remaining biases stay zero
    }
    return p;
}

std::vector<double> embed_lookup(const Matrix& table, int index, std::string_view what) {
    if (index < 0 || index >= table.rows) {
        throw std::out_of_range(std::string(what) + " index " + std::to_string(index) +
                                " out of range [0, " + std::to_string(table.rows) + ")");
    }
    const double* row = &table.data[static_cast<std::size_t>(index) * table.cols];
    return std::vector<double>(row, row + table.cols);
}

namespace {

// gates = W_ih x + b_ih + W_hh h_prev + b_hh, written into pre[0..4H).
void gate_preactivations(const std::vector<double>& x,
                         const std::vector<double>& h_prev,
                         const ModelParameters& params,
                         int h4,
                         std::vector<double>& pre) {
    const Matrix& wih = params.lstm_weight_ih;
    const Matrix& whh = params.lstm_weight_hh;
    for (int r = 0; r < h4; ++r) {
        double acc = params.lstm_bias_ih.data[r] + params.lstm_bias_hh.data[r];
        const double* wr = &wih.data[static_cast<std::size_t>(r) * wih.cols];
        for (int k = 0; k < wih.cols; ++k) acc += wr[k] * x[k];
        const double* ur = &whh.data[static_cast<std::size_t>(r) * whh.cols];
        for (int k = 0; k < whh.cols; ++k) acc += ur[k] * h_prev[k];
        pre[r] = acc;
    }
}

} // namespace

LstmCellCache lstm_cell_forward(const std::vector<double>& input,
                                const std::vector<double>& h_prev,
                                const std::vector<double>& c_prev,
                                const ModelParameters& params,
                                const ModelConfig& config) {
    const int h = config.hidden_size;
    if (static_cast<int>(input.size()) != config.input_width())
        throw std::invalid_argument("lstm_cell_forward: input width " +
                                    std::to_string(input.size()) + " != " +
                                    std::to_string(config.input_width()));
    if (static_cast<int>(h_prev.size()) != h || static_cast<int>(c_prev.size()) != h)
        throw std::invalid_argument("lstm_cell_forward: state width mismatch");

    std::vector<double> pre(4 * h);
    gate_preactivations(input, h_prev, params, 4 * h, pre);

    LstmCellCache out;
    out.gate_i.resize(h);
    out.gate_f.resize(h);
    out.gate_g.resize(h);
    out.gate_o.resize(h);
    out.cell.resize(h);
    out.cell_tanh.resize(h);
    out.hidden.resize(h);
    for (int j = 0; j < h; ++j) {
        const double i = sigmoid(pre[j]);
        const double f = sigmoid(pre[h + j]);
        const double g = std::tanh(pre[2 * h + j]);
        const double o = sigmoid(pre[3 * h + j]);
        const double c = f * c_prev[j] + i * g;
        const double ct = std::tanh(c);
        out.gate_i[j] = i;
        out.gate_f[j] = f;
        out.gate_g[j] = g;
        out.gate_o[j] = o;
        out.cell[j] = c;
        out.cell_tanh[j] = ct;
        out.hidden[j] = o * ct;
    }
    return out;
}

double ForwardCache::prob(int t) const { return sigmoid(logits[t]); }

ForwardCache sequence_forward(const SequenceSample& sample,
                              const ModelParameters& params,
                              const ModelConfig& config,
                              int max_steps) {
    const int h = config.hidden_size;
    const int width = config.input_width();
    const int steps = (max_steps < 0 || max_steps > sample.length) ? sample.length : max_steps;
    if (static_cast<int>(sample.features.size()) != sample.length * config.numeric_features)
        throw std::invalid_argument("sequence_forward: feature matrix is " +
                                    std::to_string(sample.features.size()) + " values, expected " +
                                    std::to_string(sample.length) + "x" +
                                    std::to_string(config.numeric_features));

    const std::vector<double> e_playa = embed_lookup(params.embed_playa, sample.playa_index, "playa_id");
    const std::vector<double> e_huc = embed_lookup(params.embed_huc8, sample.huc8_index, "huc8");
    const std::vector<double> e_author = embed_lookup(params.embed_author, sample.author_index, "author");

    ForwardCache cache;
    cache.steps = steps;
    cache.hidden = h;
    cache.input_width = width;
    cache.input.resize(static_cast<std::size_t>(steps) * width);
    cache.gate_i.resize(static_cast<std::size_t>(steps) * h);
    cache.gate_f.resize(static_cast<std::size_t>(steps) * h);
    cache.gate_g.resize(static_cast<std::size_t>(steps) * h);
    cache.gate_o.resize(static_cast<std::size_t>(steps) * h);
    cache.cell.resize(static_cast<std::size_t>(steps) * h);
    cache.cell_tanh.resize(static_cast<std::size_t>(steps) * h);
    cache.hidden_state.resize(static_cast<std::size_t>(steps) * h);
    cache.logits.resize(steps);

    std::vector<double> x(width), pre(4 * h);
    std::vector<double> h_prev(h, 0.0), c_prev(h, 0.0);
    for (int t = 0; t < steps; ++t) {
        double* xp = x.data();
        const double* feat = &sample.features[static_cast<std::size_t>(t) * config.numeric_features];
        for (int f = 0; f < config.numeric_features; ++f) *xp++ = feat[f];
        for (double v : e_playa) *xp++ = v;
        for (double v : e_huc) *xp++ = v;
        for (double v : e_author) *xp++ = v;
        std::copy(x.begin(), x.end(), cache.input.begin() + static_cast<std::size_t>(t) * width);

        gate_preactivations(x, h_prev, params, 4 * h, pre);
        const std::size_t off = static_cast<std::size_t>(t) * h;
        double logit = params.head_bias.data[0];
        for (int j = 0; j < h; ++j) {
            const double i = sigmoid(pre[j]);
            const double f = sigmoid(pre[h + j]);
            const double g = std::tanh(pre[2 * h + j]);
            const double o = sigmoid(pre[3 * h + j]);
            const double c = f * c_prev[j] + i * g;
            const double ct = std::tanh(c);
            const double hj = o * ct;
            cache.gate_i[off + j] = i;
            cache.gate_f[off + j] = f;
            cache.gate_g[off + j] = g;
            cache.gate_o[off + j] = o;
            cache.cell[off + j] = c;
            cache.cell_tanh[off + j] = ct;
            cache.hidden_state[off + j] = hj;
            logit += params.head_weight.data[j] * hj;
            h_prev[j] = hj;
            c_prev[j] = c;
        }
        cache.logits[t] = logit;
    }
    return cache;
}

LossSum sequence_backward_accumulate(const ForwardCache& cache,
                                     const SequenceSample& sample,
                                     Split loss_split,
                                     const ModelParameters& params,
                                     const ModelConfig& config,
                                     ModelParameters& grads) {
    const int h = cache.hidden;
    const int width = cache.input_width;
    const int nf = config.numeric_features;

    LossSum out;
    int last_masked = -1;
    for (int t = 0; t < cache.steps; ++t) {
        if (sample.split[t] == loss_split) {
            out.sum += bce_with_logits(cache.logits[t], sample.labels[t]);
            ++out.count;
            last_masked = t;
        }
    }
    if (out.count == 0) return out;

    std::vector<double> dh(h, 0.0), dc(h, 0.0), da(4 * h);
    std::vector<double> dx_embed(width - nf, 0.0); // summed over timesteps

    for (int t = last_masked; t >= 0; --t) {
        const std::size_t off = static_cast<std::size_t>(t) * h;
        if (sample.split[t] == loss_split) {
            // d bce/d logit = sigmoid(logit) - y
            const double dlogit = sigmoid(cache.logits[t]) - static_cast<double>(sample.labels[t]);
            grads.head_bias.data[0] += dlogit;
            for (int j = 0; j < h; ++j) {
                grads.head_weight.data[j] += dlogit * cache.hidden_state[off + j];
                dh[j] += dlogit * params.head_weight.data[j];
            }
        }
        for (int j = 0; j < h; ++j) {
            const double i = cache.gate_i[off + j];
            const double f = cache.gate_f[off + j];
            const double g = cache.gate_g[off + j];
            const double o = cache.gate_o[off + j];
            const double ct = cache.cell_tanh[off + j];
            const double c_prev = (t > 0) ? cache.cell[off - h + j] : 0.0;

            const double do_ = dh[j] * ct;
            const double dcj = dc[j] + dh[j] * o * (1.0 - ct * ct);
            const double di = dcj * g;
            const double df = dcj * c_prev;
            const double dg = dcj * i;

            da[j] = di * i * (1.0 - i);
            da[h + j] = df * f * (1.0 - f);
            da[2 * h + j] = dg * (1.0 - g * g);
            da[3 * h + j] = do_ * o * (1.0 - o);

            dc[j] = dcj * f; // becomes dc_prev
        }

        const double* x = &cache.input[static_cast<std::size_t>(t) * width];
        const double* h_prev = (t > 0) ? &cache.hidden_state[off - h] : nullptr;
        for (int r = 0; r < 4 * h; ++r) {
            const double d = da[r];
            if (d == 0.0) continue;
            double* wg = &grads.lstm_weight_ih.data[static_cast<std::size_t>(r) * width];
            for (int k = 0; k < width; ++k) wg[k] += d * x[k];
            grads.lstm_bias_ih.data[r] += d;
            grads.lstm_bias_hh.data[r] += d;
            if (h_prev) {
                double* ug = &grads.lstm_weight_hh.data[static_cast<std::size_t>(r) * h];
                for (int k = 0; k < h; ++k) ug[k] += d * h_prev[k];
            }
        }

        // dx for the embedding slice and dh_prev
        for (int k = nf; k < width; ++k) {
            double acc = 0.0;
            for (int r = 0; r < 4 * h; ++r)
                acc += params.lstm_weight_ih.data[static_cast<std::size_t>(r) * width + k] * da[r];
            dx_embed[k - nf] += acc;
        }
        for (int k = 0; k < h; ++k) {
            double acc = 0.0;
            for (int r = 0; r < 4 * h; ++r)
                acc += params.lstm_weight_hh.data[static_cast<std::size_t>(r) * h + k] * da[r];
            dh[k] = acc;
        }
    }

    // Scatter the accumulated embedding-slice gradient into the used rows.
    {
        double* row = &grads.embed_playa.data[static_cast<std::size_t>(sample.playa_index) *
                                              config.embed_playa];
        for (int k = 0; k < config.embed_playa; ++k) row[k] += dx_embed[k];
    }
    {
        double* row = &grads.embed_huc8.data[static_cast<std::size_t>(sample.huc8_index) *
                                             config.embed_huc8];
        for (int k = 0; k < config.embed_huc8; ++k) row[k] += dx_embed[config.embed_playa + k];
    }
    {
        double* row = &grads.embed_author.data[static_cast<std::size_t>(sample.author_index) *
                                               config.embed_author];
        for (int k = 0; k < config.embed_author; ++k)
            row[k] += dx_embed[config.embed_playa + config.embed_huc8 + k];
    }
    return out;
}

SequenceLoss sequence_backward(const ForwardCache& cache,
                               const SequenceSample& sample,
                               Split loss_split,
                               const ModelParameters& params,
                               const ModelConfig& config) {
    SequenceLoss result;
    result.grads = ModelParameters::zeros_like(config);
    const LossSum sum = sequence_backward_accumulate(cache, sample, loss_split, params, config,
                                                     result.grads);
    if (sum.count == 0) throw std::runtime_error("empty loss window");
    result.loss = sum.sum / static_cast<double>(sum.count);
    const double scale = 1.0 / static_cast<double>(sum.count);
    for (auto [name, m] : result.grads.named())
        for (double& v : m->data) v *= scale;
    return result;
}

LossSum sequence_loss_sum(const SequenceSample& sample,
                          const ModelParameters& params,
                          const ModelConfig& config,
                          Split loss_split) {
    LossSum out;
    const int steps = sample.prefix_length(loss_split);
    if (steps == 0) return out;
    const ForwardCache cache = sequence_forward(sample, params, config, steps);
    for (int t = 0; t < steps; ++t) {
        if (sample.split[t] == loss_split) {
            out.sum += bce_with_logits(cache.logits[t], sample.labels[t]);
            ++out.count;
        }
    }
    return out;
}

} // namespace playa
