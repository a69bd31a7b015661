#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "aclp/matrix.hpp"
#include "aclp/metrics.hpp"
#include "aclp/rng.hpp"
#include "aclp/subgraph.hpp"

namespace aclp {

// Layer sizes of the link classifier: four graph convolutions whose
// channel-concatenated output feeds a sort-pooled 1-D convolution stack.
inline constexpr std::array<int, 4> kGcnSizes = {32, 32, 32, 1};
inline constexpr int kConcatWidth = 32 + 32 + 32 + 1; // 97
inline constexpr int kConv1Channels = 16;             // kernel = kConcatWidth, stride = kConcatWidth
inline constexpr int kConv2Channels = 32;
inline constexpr int kConv2Kernel = 5; // stride 1
inline constexpr int kDenseWidth = 128;
inline constexpr int kMinSortPool = 10; // keeps the conv2 output non-empty

inline int conv2_output_len(int sortpool_k) { return sortpool_k / 2 - (kConv2Kernel - 1); }

// All trainable tensors. Gradients reuse the same layout.
struct ParamSet {
    std::array<Mat, 4> gcn_w;
    std::array<std::vector<double>, 4> gcn_b;
    Mat conv1_w;                 // kConv1Channels x kConcatWidth
    std::vector<double> conv1_b; // kConv1Channels
    Mat conv2_w;                 // kConv2Channels x (kConv1Channels * kConv2Kernel)
    std::vector<double> conv2_b; // kConv2Channels
    Mat dense_w;                 // kDenseWidth x flat
    std::vector<double> dense_b; // kDenseWidth
    std::vector<double> out_w;   // kDenseWidth
    double out_b = 0.0;

    static ParamSet zeros(int in_width, int sortpool_k) {
        ParamSet p;
        int in = in_width;
        for (std::size_t t = 0; t < kGcnSizes.size(); ++t) {
            p.gcn_w[t] = Mat(in, kGcnSizes[t]);
            p.gcn_b[t].assign(kGcnSizes[t], 0.0);
            in = kGcnSizes[t];
        }
        p.conv1_w = Mat(kConv1Channels, kConcatWidth);
        p.conv1_b.assign(kConv1Channels, 0.0);
        p.conv2_w = Mat(kConv2Channels, kConv1Channels * kConv2Kernel);
        p.conv2_b.assign(kConv2Channels, 0.0);
        const int flat = kConv2Channels * conv2_output_len(sortpool_k);
        p.dense_w = Mat(kDenseWidth, flat);
        p.dense_b.assign(kDenseWidth, 0.0);
        p.out_w.assign(kDenseWidth, 0.0);
        p.out_b = 0.0;
        return p;
    }

    template <class F>
    void for_each(F&& f) {
        std::size_t idx = 0;
        auto visit_mat = [&](Mat& m) {
            for (double& v : m.d) f(idx++, v);
        };
        auto visit_vec = [&](std::vector<double>& v) {
            for (double& x : v) f(idx++, x);
        };
        for (std::size_t t = 0; t < 4; ++t) {
            visit_mat(gcn_w[t]);
            visit_vec(gcn_b[t]);
        }
        visit_mat(conv1_w);
        visit_vec(conv1_b);
        visit_mat(conv2_w);
        visit_vec(conv2_b);
        visit_mat(dense_w);
        visit_vec(dense_b);
        visit_vec(out_w);
        f(idx++, out_b);
    }

    std::size_t count() {
        std::size_t n = 0;
        for_each([&](std::size_t, double&) { ++n; });
        return n;
    }
};

struct ModelParams {
    int in_width = 0;          // max_label_classes + vocab k
    int sortpool_k = kMinSortPool;
    int max_label_classes = 0;
    int vocab_k = 0;
    std::vector<std::string> vocab_names; // label order the type codes assume; may be empty
    ParamSet p;

    static ModelParams init(int in_width, int sortpool_k, int max_label_classes, int vocab_k,
                            std::uint64_t seed) {
        ModelParams m;
        m.in_width = in_width;
        m.sortpool_k = std::max(sortpool_k, kMinSortPool);
        m.max_label_classes = max_label_classes;
        m.vocab_k = vocab_k;
        m.p = ParamSet::zeros(in_width, m.sortpool_k);

        Rng rng(seed);
        auto glorot = [&rng](Mat& w, int fan_in, int fan_out) {
            const double r = std::sqrt(6.0 / (fan_in + fan_out));
            for (double& v : w.d) v = rng.real(-r, r);
        };
        int in = in_width;
        for (std::size_t t = 0; t < 4; ++t) {
            glorot(m.p.gcn_w[t], in, kGcnSizes[t]);
            in = kGcnSizes[t];
        }
        glorot(m.p.conv1_w, kConcatWidth, kConv1Channels * kConcatWidth);
        glorot(m.p.conv2_w, kConv1Channels * kConv2Kernel, kConv2Channels * kConv2Kernel);
        glorot(m.p.dense_w, m.p.dense_w.cols, kDenseWidth);
        {
            const double r = std::sqrt(6.0 / (kDenseWidth + 1));
            for (double& v : m.p.out_w) v = rng.real(-r, r);
        }
        return m;
    }
};

namespace detail {

// Row-normalized propagation operator of A + I.
inline Mat propagation_operator(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    Mat p(n, n);
    for (int u = 0; u < n; ++u) {
        const double inv_deg = 1.0 / (1.0 + static_cast<double>(adj[u].size()));
        p.at(u, u) = inv_deg;
        for (int v : adj[u]) p.at(u, v) = inv_deg;
    }
    return p;
}

inline Mat feature_matrix(const LabeledSubgraph& sub) {
    const auto rows = sub.features();
    Mat x(static_cast<int>(rows.size()), sub.feature_width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < sub.feature_width; ++j) x.at(static_cast<int>(i), j) = rows[i][j];
    return x;
}

// Sort-pooling order: rows by last channel descending, ties by the full
// concatenated row (so permuting input rows cannot change the pooled
// matrix), final fallback on the index for a stable total order.
inline std::vector<int> sortpool_order(const Mat& zcat) {
    std::vector<int> order(zcat.rows);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int last = zcat.cols - 1;
        if (zcat.at(a, last) != zcat.at(b, last)) return zcat.at(a, last) > zcat.at(b, last);
        for (int j = 0; j < zcat.cols; ++j)
            if (zcat.at(a, j) != zcat.at(b, j)) return zcat.at(a, j) > zcat.at(b, j);
        return a < b;
    });
    return order;
}

struct ForwardTrace {
    Mat prop;                 // n x n
    Mat x;                    // input features
    std::array<Mat, 4> m;     // m[t] = prop * z_{t-1}
    std::array<Mat, 4> z;     // post-tanh layer outputs
    std::vector<int> slots;   // sortpool_k entries, original row or -1 (pad)
    std::vector<double> flat; // pooled rows flattened
    Mat c1;                   // channels x k
    Mat mp;                   // channels x k/2
    std::vector<std::vector<int>> pool_arg;
    Mat c2;
    std::vector<double> g;
    std::vector<double> h_pre, h, h_drop;
    double logit = 0.0;
    double prob = 0.0;
};

inline ForwardTrace run_forward(const ModelParams& model, const LabeledSubgraph& sub,
                                const std::vector<double>* dropout_mask) {
    if (sub.size() == 0) throw std::invalid_argument("forward: empty subgraph");
    if (sub.feature_width != model.in_width)
        throw std::invalid_argument("forward: feature width " +
                                    std::to_string(sub.feature_width) + " != model input " +
                                    std::to_string(model.in_width));

    ForwardTrace t;
    t.prop = propagation_operator(sub.adj);
    t.x = feature_matrix(sub);

    const Mat* prev = &t.x;
    for (std::size_t layer = 0; layer < 4; ++layer) {
        t.m[layer] = matmul(t.prop, *prev);
        Mat z = matmul(t.m[layer], model.p.gcn_w[layer]);
        for (int i = 0; i < z.rows; ++i)
            for (int j = 0; j < z.cols; ++j)
                z.at(i, j) = std::tanh(z.at(i, j) + model.p.gcn_b[layer][j]);
        t.z[layer] = std::move(z);
        prev = &t.z[layer];
    }

    const int n = sub.size();
    Mat zcat(n, kConcatWidth);
    for (int i = 0; i < n; ++i) {
        int col = 0;
        for (std::size_t layer = 0; layer < 4; ++layer)
            for (int j = 0; j < kGcnSizes[layer]; ++j) zcat.at(i, col++) = t.z[layer].at(i, j);
    }

    const auto order = sortpool_order(zcat);
    const int K = model.sortpool_k;
    t.slots.assign(K, -1);
    for (int s = 0; s < K && s < n; ++s) t.slots[s] = order[s];

    t.flat.assign(static_cast<std::size_t>(K) * kConcatWidth, 0.0);
    for (int s = 0; s < K; ++s) {
        if (t.slots[s] < 0) continue;
        for (int j = 0; j < kConcatWidth; ++j)
            t.flat[static_cast<std::size_t>(s) * kConcatWidth + j] = zcat.at(t.slots[s], j);
    }

    t.c1 = Mat(kConv1Channels, K);
    for (int ch = 0; ch < kConv1Channels; ++ch)
        for (int s = 0; s < K; ++s) {
            double acc = model.p.conv1_b[ch];
            for (int j = 0; j < kConcatWidth; ++j)
                acc += model.p.conv1_w.at(ch, j) *
                       t.flat[static_cast<std::size_t>(s) * kConcatWidth + j];
            t.c1.at(ch, s) = acc;
        }

    const int half = K / 2;
    t.mp = Mat(kConv1Channels, half);
    t.pool_arg.assign(kConv1Channels, std::vector<int>(half, 0));
    for (int ch = 0; ch < kConv1Channels; ++ch)
        for (int s = 0; s < half; ++s) {
            const double a = t.c1.at(ch, 2 * s), b = t.c1.at(ch, 2 * s + 1);
            t.mp.at(ch, s) = a >= b ? a : b;
            t.pool_arg[ch][s] = a >= b ? 2 * s : 2 * s + 1;
        }

    const int len2 = conv2_output_len(K);
    t.c2 = Mat(kConv2Channels, len2);
    for (int oc = 0; oc < kConv2Channels; ++oc)
        for (int s = 0; s < len2; ++s) {
            double acc = model.p.conv2_b[oc];
            for (int ic = 0; ic < kConv1Channels; ++ic)
                for (int j = 0; j < kConv2Kernel; ++j)
                    acc += model.p.conv2_w.at(oc, ic * kConv2Kernel + j) * t.mp.at(ic, s + j);
            t.c2.at(oc, s) = acc;
        }

    t.g.assign(t.c2.d.begin(), t.c2.d.end());

    t.h_pre.assign(kDenseWidth, 0.0);
    for (int r = 0; r < kDenseWidth; ++r) {
        double acc = model.p.dense_b[r];
        for (std::size_t c = 0; c < t.g.size(); ++c) acc += model.p.dense_w.at(r, static_cast<int>(c)) * t.g[c];
        t.h_pre[r] = acc;
    }
    t.h.resize(kDenseWidth);
    for (int r = 0; r < kDenseWidth; ++r) t.h[r] = t.h_pre[r] > 0.0 ? t.h_pre[r] : 0.0;

    t.h_drop = t.h;
    if (dropout_mask) {
        if (dropout_mask->size() != static_cast<std::size_t>(kDenseWidth))
            throw std::invalid_argument("forward: dropout mask size mismatch");
        for (int r = 0; r < kDenseWidth; ++r) t.h_drop[r] *= (*dropout_mask)[r];
    }

    double s = model.p.out_b;
    for (int r = 0; r < kDenseWidth; ++r) s += model.p.out_w[r] * t.h_drop[r];
    t.logit = s;
    t.prob = 1.0 / (1.0 + std::exp(-s));
    return t;
}

} // namespace detail

// Link probability for a labeled subgraph. Inference path: no dropout.
inline double forward(const ModelParams& model, const LabeledSubgraph& sub) {
    return detail::run_forward(model, sub, nullptr).prob;
}

inline constexpr double kProbClamp = 1e-7;

// Binary cross-entropy with the probability clamped to
// [kProbClamp, 1 - kProbClamp].
inline double loss_bce(double p, int y) {
    const double q = std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
    return -(y ? std::log(q) : std::log(1.0 - q));
}

struct BackwardResult {
    ParamSet grads;
    Mat d_features; // d loss / d input feature matrix
    double prob = 0.0;
    double loss = 0.0;
};

// Exact reverse-mode gradients of loss_bce(forward(...)) for every
// parameter. The dropout mask (entries 0 or 1/(1-rate)) is fixed for the
// call; pass nullptr for the identity mask.
inline BackwardResult backward(const ModelParams& model, const LabeledSubgraph& sub, int y,
                               const std::vector<double>* dropout_mask = nullptr) {
    using namespace detail;
    ForwardTrace t = run_forward(model, sub, dropout_mask);

    BackwardResult out;
    out.prob = t.prob;
    out.loss = loss_bce(t.prob, y);
    out.grads = ParamSet::zeros(model.in_width, model.sortpool_k);

    // d loss / d logit = p - y while p is inside the clamp band, else 0
    double dlogit = 0.0;
    if (t.prob > kProbClamp && t.prob < 1.0 - kProbClamp) dlogit = t.prob - static_cast<double>(y);

    ParamSet& g = out.grads;
    for (int r = 0; r < kDenseWidth; ++r) g.out_w[r] = dlogit * t.h_drop[r];
    g.out_b = dlogit;

    std::vector<double> dh(kDenseWidth);
    for (int r = 0; r < kDenseWidth; ++r) {
        double v = dlogit * model.p.out_w[r];
        if (dropout_mask) v *= (*dropout_mask)[r];
        dh[r] = t.h_pre[r] > 0.0 ? v : 0.0;
    }

    std::vector<double> dg(t.g.size(), 0.0);
    for (int r = 0; r < kDenseWidth; ++r) {
        if (dh[r] == 0.0) continue;
        for (std::size_t c = 0; c < t.g.size(); ++c) {
            g.dense_w.at(r, static_cast<int>(c)) = dh[r] * t.g[c];
            dg[c] += dh[r] * model.p.dense_w.at(r, static_cast<int>(c));
        }
        g.dense_b[r] = dh[r];
    }

    const int K = model.sortpool_k;
    const int half = K / 2;
    const int len2 = conv2_output_len(K);

    Mat dmp(kConv1Channels, half);
    for (int oc = 0; oc < kConv2Channels; ++oc)
        for (int s = 0; s < len2; ++s) {
            const double up = dg[static_cast<std::size_t>(oc) * len2 + s];
            if (up == 0.0) continue;
            g.conv2_b[oc] += up;
            for (int ic = 0; ic < kConv1Channels; ++ic)
                for (int j = 0; j < kConv2Kernel; ++j) {
                    g.conv2_w.at(oc, ic * kConv2Kernel + j) += up * t.mp.at(ic, s + j);
                    dmp.at(ic, s + j) += up * model.p.conv2_w.at(oc, ic * kConv2Kernel + j);
                }
        }

    Mat dc1(kConv1Channels, K);
    for (int ch = 0; ch < kConv1Channels; ++ch)
        for (int s = 0; s < half; ++s) dc1.at(ch, t.pool_arg[ch][s]) += dmp.at(ch, s);

    std::vector<double> dflat(t.flat.size(), 0.0);
    for (int ch = 0; ch < kConv1Channels; ++ch)
        for (int s = 0; s < K; ++s) {
            const double up = dc1.at(ch, s);
            if (up == 0.0) continue;
            g.conv1_b[ch] += up;
            for (int j = 0; j < kConcatWidth; ++j) {
                g.conv1_w.at(ch, j) += up * t.flat[static_cast<std::size_t>(s) * kConcatWidth + j];
                dflat[static_cast<std::size_t>(s) * kConcatWidth + j] +=
                    up * model.p.conv1_w.at(ch, j);
            }
        }

    const int n = sub.size();
    Mat dzcat(n, kConcatWidth);
    for (int s = 0; s < K; ++s) {
        const int row = t.slots[s];
        if (row < 0) continue;
        for (int j = 0; j < kConcatWidth; ++j)
            dzcat.at(row, j) += dflat[static_cast<std::size_t>(s) * kConcatWidth + j];
    }

    // split the concatenation, then walk the graph convolutions backwards
    std::array<Mat, 4> dz;
    {
        int col = 0;
        for (std::size_t layer = 0; layer < 4; ++layer) {
            dz[layer] = Mat(n, kGcnSizes[layer]);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < kGcnSizes[layer]; ++j) dz[layer].at(i, j) = dzcat.at(i, col + j);
            col += kGcnSizes[layer];
        }
    }

    Mat carry; // gradient flowing into z[layer] from the layer above
    const Mat prop_t = transpose(t.prop);
    for (int layer = 3; layer >= 0; --layer) {
        Mat dtotal = dz[layer];
        if (carry.rows > 0)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < dtotal.cols; ++j) dtotal.at(i, j) += carry.at(i, j);

        // through tanh
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < dtotal.cols; ++j) {
                const double z = t.z[layer].at(i, j);
                dtotal.at(i, j) *= (1.0 - z * z);
            }

        g.gcn_w[layer] = matmul(transpose(t.m[layer]), dtotal);
        for (int j = 0; j < dtotal.cols; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += dtotal.at(i, j);
            g.gcn_b[layer][j] = acc;
        }
        carry = matmul(matmul(prop_t, dtotal), transpose(model.p.gcn_w[layer]));
    }
    out.d_features = std::move(carry);
    return out;
}

struct TrainConfig {
    double learning_rate = 1e-4; // synthetic profile; 1e-6 / 6e-8 mirror the report profiles
    int max_epochs = 50;
    int batch_size = 1;
    double early_stop_activate_above = 0.5000;
    double early_stop_min_delta = 0.0001;
    int early_stop_patience = 3;
    double sortpool_percentile = 0.6;
    double dropout = 0.5;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
};

struct EpochRecord {
    double train_loss = 0.0;
    double val_accuracy = 0.0;
    double val_auc = 0.0; // NaN when the validation split has one class
    double wall_time_s = 0.0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;    // 1-based; 0 when no epoch ran
    int stopped_epoch = 0; // 1-based epoch the early-stop rule fired at, 0 otherwise
};

struct TrainResult {
    ModelParams params;
    TrainHistory history;
};

// Early stopping engages once validation accuracy improves and exceeds
// `activate_above`; afterwards, `patience` consecutive epochs without an
// improvement of at least `min_delta` stop the run. Returns the 1-based
// epoch the rule fires at, or -1 when it never does.
inline int early_stop_epoch(const std::vector<double>& accuracies, double activate_above = 0.5,
                            double min_delta = 0.0001, int patience = 3) {
    bool activated = false;
    double best = -std::numeric_limits<double>::infinity();
    int stall = 0;
    for (std::size_t i = 0; i < accuracies.size(); ++i) {
        const double acc = accuracies[i];
        if (!activated) {
            if (acc > best && acc > activate_above) {
                activated = true;
                best = acc;
                stall = 0;
            } else {
                best = std::max(best, acc);
            }
            continue;
        }
        if (acc - best >= min_delta) {
            best = acc;
            stall = 0;
        } else if (++stall >= patience) {
            return static_cast<int>(i) + 1;
        }
    }
    return -1;
}

// Sort-pool size: the `percentile` quantile of the training subgraph
// sizes, never below kMinSortPool.
inline int sortpool_size(std::vector<int> sizes, double percentile) {
    if (sizes.empty()) return kMinSortPool;
    std::sort(sizes.begin(), sizes.end());
    const int n = static_cast<int>(sizes.size());
    int idx = static_cast<int>(std::ceil(percentile * n)) - 1;
    idx = std::max(0, std::min(idx, n - 1));
    return std::max(sizes[idx], kMinSortPool);
}

namespace detail {

struct AdamState {
    std::vector<double> m, v;
    long long t = 0;
};

inline void adam_step(ParamSet& params, ParamSet& grads, AdamState& state, const TrainConfig& cfg) {
    if (state.m.empty()) {
        const std::size_t n = params.count();
        state.m.assign(n, 0.0);
        state.v.assign(n, 0.0);
    }
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.t));

    std::vector<double*> gptr;
    gptr.reserve(state.m.size());
    grads.for_each([&](std::size_t, double& v) { gptr.push_back(&v); });

    params.for_each([&](std::size_t i, double& w) {
        const double g = *gptr[i];
        state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * g;
        state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        w -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    });
}

} // namespace detail

// Streaming SGD (batch size 1) with Adam. Evaluates validation accuracy
// after every epoch and returns the best-accuracy checkpoint. Aborts with
// a diagnostic if the loss diverges to NaN.
inline TrainResult train(const std::vector<LabeledSubgraph>& train_set,
                         const std::vector<LabeledSubgraph>& val_set, const TrainConfig& cfg) {
    if (train_set.empty()) throw std::invalid_argument("train: empty training split");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
    if (cfg.early_stop_patience < 1) throw std::invalid_argument("train: patience must be >= 1");
    if (cfg.sortpool_percentile <= 0.0 || cfg.sortpool_percentile > 1.0)
        throw std::invalid_argument("train: sortpool percentile must be in (0, 1]");

    std::vector<int> sizes;
    sizes.reserve(train_set.size());
    for (const auto& sub : train_set) sizes.push_back(sub.size());
    const int K = sortpool_size(sizes, cfg.sortpool_percentile);

    const int in_width = train_set.front().feature_width;
    ModelParams model = ModelParams::init(in_width, K, train_set.front().max_label_classes,
                                          train_set.front().k, cfg.seed);

    TrainResult result;
    result.params = model;
    if (cfg.max_epochs <= 0) return result;

    Rng rng(derive_seed(cfg.seed, 0x7261696e)); // independent stream for masks/shuffles
    detail::AdamState adam;

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    double best_acc = -std::numeric_limits<double>::infinity();
    bool activated = false;
    double es_best = -std::numeric_limits<double>::infinity();
    int stall = 0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        rng.shuffle(order);
        double loss_sum = 0.0;

        for (std::size_t idx : order) {
            const LabeledSubgraph& sub = train_set[idx];
            std::vector<double> mask(kDenseWidth, 1.0);
            if (cfg.dropout > 0.0) {
                const double keep = 1.0 - cfg.dropout;
                for (double& v : mask) v = rng.real01() < keep ? 1.0 / keep : 0.0;
            }
            BackwardResult bw = backward(model, sub, sub.label, &mask);
            if (!std::isfinite(bw.loss))
                throw std::runtime_error("train: loss diverged at epoch " +
                                         std::to_string(epoch));
            loss_sum += bw.loss;
            detail::adam_step(model.p, bw.grads, adam, cfg);
        }

        EpochRecord rec;
        rec.train_loss = loss_sum / static_cast<double>(train_set.size());

        int correct = 0;
        std::vector<double> scores;
        std::vector<int> labels;
        for (const auto& sub : val_set) {
            const double p = forward(model, sub);
            scores.push_back(p);
            labels.push_back(sub.label);
            if ((p > 0.5 ? 1 : 0) == sub.label) ++correct;
        }
        rec.val_accuracy =
            val_set.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(val_set.size());
        rec.val_auc = std::numeric_limits<double>::quiet_NaN();
        {
            bool has_pos = false, has_neg = false;
            for (int l : labels) (l ? has_pos : has_neg) = true;
            if (has_pos && has_neg) rec.val_auc = roc_auc(scores, labels);
        }
        rec.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.history.epochs.push_back(rec);

        if (rec.val_accuracy > best_acc) {
            best_acc = rec.val_accuracy;
            result.params = model;
            result.history.best_epoch = epoch;
        }

        const double acc = rec.val_accuracy;
        if (!activated) {
            if (acc > es_best && acc > cfg.early_stop_activate_above) {
                activated = true;
                es_best = acc;
                stall = 0;
            } else {
                es_best = std::max(es_best, acc);
            }
        } else if (acc - es_best >= cfg.early_stop_min_delta) {
            es_best = acc;
            stall = 0;
        } else if (++stall >= cfg.early_stop_patience) {
            result.history.stopped_epoch = epoch;
            break;
        }
    }
    return result;
}

// Versioned JSON checkpoint: shape manifest plus flat weight arrays.
inline constexpr const char* kCheckpointSchema = "gnn-aclp-dgcnn-v1";

inline std::string save_checkpoint(const ModelParams& model) {
    nlohmann::ordered_json doc;
    doc["format"] = kCheckpointSchema;
    doc["in_width"] = model.in_width;
    doc["sortpool_k"] = model.sortpool_k;
    doc["max_label_classes"] = model.max_label_classes;
    doc["vocab_k"] = model.vocab_k;
    doc["vocabulary"] = model.vocab_names;
    auto dump_mat = [](const Mat& m) {
        nlohmann::ordered_json j;
        j["shape"] = {m.rows, m.cols};
        j["data"] = m.d;
        return j;
    };
    nlohmann::ordered_json tensors;
    ModelParams copy = model;
    for (int t = 0; t < 4; ++t) {
        tensors["gcn_w" + std::to_string(t)] = dump_mat(copy.p.gcn_w[t]);
        tensors["gcn_b" + std::to_string(t)] = copy.p.gcn_b[t];
    }
    tensors["conv1_w"] = dump_mat(copy.p.conv1_w);
    tensors["conv1_b"] = copy.p.conv1_b;
    tensors["conv2_w"] = dump_mat(copy.p.conv2_w);
    tensors["conv2_b"] = copy.p.conv2_b;
    tensors["dense_w"] = dump_mat(copy.p.dense_w);
    tensors["dense_b"] = copy.p.dense_b;
    tensors["out_w"] = copy.p.out_w;
    tensors["out_b"] = copy.p.out_b;
    doc["tensors"] = std::move(tensors);
    return doc.dump(2);
}

inline ModelParams load_checkpoint(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("checkpoint: not valid JSON: ") + e.what());
    }
    if (!doc.contains("format") || doc["format"] != kCheckpointSchema)
        throw std::runtime_error("checkpoint: unsupported format");

    ModelParams model;
    model.in_width = doc.at("in_width").get<int>();
    model.sortpool_k = doc.at("sortpool_k").get<int>();
    model.max_label_classes = doc.at("max_label_classes").get<int>();
    model.vocab_k = doc.at("vocab_k").get<int>();
    if (doc.contains("vocabulary"))
        model.vocab_names = doc["vocabulary"].get<std::vector<std::string>>();
    if (model.sortpool_k < kMinSortPool)
        throw std::runtime_error("checkpoint: sortpool_k below minimum");
    model.p = ParamSet::zeros(model.in_width, model.sortpool_k);

    const auto& tensors = doc.at("tensors");
    auto load_mat = [&](const char* name, Mat& into) {
        const auto& j = tensors.at(name);
        const auto shape = j.at("shape").get<std::vector<int>>();
        if (shape.size() != 2 || shape[0] != into.rows || shape[1] != into.cols)
            throw std::runtime_error(std::string("checkpoint: shape mismatch for ") + name);
        const auto data = j.at("data").get<std::vector<double>>();
        if (data.size() != into.d.size())
            throw std::runtime_error(std::string("checkpoint: data size mismatch for ") + name);
        into.d = data;
    };
    auto load_vec = [&](const char* name, std::vector<double>& into) {
        const auto data = tensors.at(name).get<std::vector<double>>();
        if (data.size() != into.size())
            throw std::runtime_error(std::string("checkpoint: data size mismatch for ") + name);
        into = data;
    };
    for (int t = 0; t < 4; ++t) {
        load_mat(("gcn_w" + std::to_string(t)).c_str(), model.p.gcn_w[t]);
        load_vec(("gcn_b" + std::to_string(t)).c_str(), model.p.gcn_b[t]);
    }
    load_mat("conv1_w", model.p.conv1_w);
    load_vec("conv1_b", model.p.conv1_b);
    load_mat("conv2_w", model.p.conv2_w);
    load_vec("conv2_b", model.p.conv2_b);
    load_mat("dense_w", model.p.dense_w);
    load_vec("dense_b", model.p.dense_b);
    load_vec("out_w", model.p.out_w);
    model.p.out_b = tensors.at("out_b").get<double>();
    return model;
}

} // namespace aclp
