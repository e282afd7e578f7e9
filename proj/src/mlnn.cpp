#include "riq/mlnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "riq/errors.hpp"
#include "riq/rng.hpp"

namespace riq {

void MlafParams::validate() const {
    if (beta <= 0) throw Error("beta must be > 0");
    if (c <= 0) throw Error("c must be > 0");
    if (n < 2) throw Error("n must be >= 2");
}

void TrainConfig::validate() const {
    if (learning_rate <= 0) throw Error("learning_rate must be > 0");
    if (epochs < 1) throw Error("epochs must be >= 1");
}

double sigmoid(double x, double beta) { return 1.0 / (1.0 + std::exp(-beta * x)); }

namespace {

int window_index(double x, const MlafParams& p) {
    const int lam = static_cast<int>(std::ceil(x / p.c));
    return std::clamp(lam, 1, p.n);
}

}  // namespace

double mlaf(double x, const MlafParams& p) {
    const int lam = window_index(x, p);
    return sigmoid(x, p.beta) + (lam - 1) * sigmoid(p.c, p.beta);
}

double mlaf_grad(double x, const MlafParams& p) {
    const double f = sigmoid(x, p.beta);
    return p.beta * f * (1.0 - f);
}

double level_center(int lambda, const MlafParams& p) {
    return sigmoid(p.c * (lambda - 0.5), p.beta) + (lambda - 1) * sigmoid(p.c, p.beta);
}

ForwardResult forward(const MlnnModel& model, const FeatureVector& v) {
    if (v.size() != model.input_dim) throw DimensionMismatch("input does not match model input_dim");
    ForwardResult fr;
    fr.hidden.resize(model.hidden_dim);
    for (std::size_t j = 0; j < model.hidden_dim; ++j) {
        double acc = model.b_hidden[j];
        const double* w = &model.w_hidden[j * model.input_dim];
        for (std::size_t d = 0; d < model.input_dim; ++d) acc += w[d] * v[d];
        fr.hidden[j] = sigmoid(acc, 1.0);
    }
    double u = model.b_out;
    for (std::size_t j = 0; j < model.hidden_dim; ++j) u += model.w_out[j] * fr.hidden[j];
    fr.pre_activation = std::clamp(u, 0.0, model.mlaf_params.n * model.mlaf_params.c);
    fr.output = mlaf(fr.pre_activation, model.mlaf_params);
    return fr;
}

Gradient loss_and_gradient(const MlnnModel& model, const std::vector<LabeledRegion>& batch) {
    const MlafParams& p = model.mlaf_params;
    const std::size_t input_dim = model.input_dim;
    const std::size_t hidden_dim = model.hidden_dim;
    const double u_max = p.n * p.c;
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    Gradient g;
    g.w_hidden.assign(model.w_hidden.size(), 0.0);
    g.b_hidden.assign(hidden_dim, 0.0);
    g.w_out.assign(hidden_dim, 0.0);

    std::vector<double> hidden(hidden_dim);
    for (const auto& sample : batch) {
        const FeatureVector& v = sample.features;
        if (v.size() != input_dim) throw DimensionMismatch("sample does not match model input_dim");
        for (std::size_t j = 0; j < hidden_dim; ++j) {
            double acc = model.b_hidden[j];
            const double* w = &model.w_hidden[j * input_dim];
            for (std::size_t d = 0; d < input_dim; ++d) acc += w[d] * v[d];
            hidden[j] = sigmoid(acc, 1.0);
        }
        double u_raw = model.b_out;
        for (std::size_t j = 0; j < hidden_dim; ++j) u_raw += model.w_out[j] * hidden[j];
        const double u = std::clamp(u_raw, 0.0, u_max);
        const double err = mlaf(u, p) - level_center(sample.category, p);
        g.loss += err * err;

        // straight-through at the clamp: the derivative is taken at the
        // clamped point so samples pushed outside [0, n*c] can re-enter
        const double gu = 2.0 * inv_n * err * mlaf_grad(u, p);

        g.b_out += gu;
        for (std::size_t j = 0; j < hidden_dim; ++j) {
            g.w_out[j] += gu * hidden[j];
            const double gh = gu * model.w_out[j] * hidden[j] * (1.0 - hidden[j]);
            g.b_hidden[j] += gh;
            double* gw = &g.w_hidden[j * input_dim];
            for (std::size_t d = 0; d < input_dim; ++d) gw[d] += gh * v[d];
        }
    }
    g.loss *= inv_n;
    return g;
}

TrainResult train(const std::vector<LabeledRegion>& data, const TrainConfig& cfg, const MlafParams& p,
                  std::size_t input_dim, std::size_t hidden_dim) {
    cfg.validate();
    p.validate();
    if (data.empty()) throw EmptyTrainingSet("train called with no samples");
    std::vector<std::size_t> per_category(static_cast<std::size_t>(p.n), 0);
    for (const auto& s : data) {
        if (s.category < 1 || s.category > p.n) throw Error("category index out of range");
        if (s.features.size() != input_dim) throw DimensionMismatch("sample does not match input_dim");
        per_category[static_cast<std::size_t>(s.category - 1)]++;
    }
    for (int lam = 1; lam <= p.n; ++lam)
        if (per_category[static_cast<std::size_t>(lam - 1)] == 0)
            throw EmptyCategory("no training samples for category " + std::to_string(lam));

    MlnnModel model;
    model.input_dim = input_dim;
    model.hidden_dim = hidden_dim;
    model.mlaf_params = p;
    model.rng_seed = cfg.rng_seed;
    model.normalizer.mode = NormMode::unit;
    model.normalizer.mean.assign(input_dim, 0.0);
    model.normalizer.stddev.assign(input_dim, 1.0);

    Rng rng(cfg.rng_seed);
    const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
    const double out_bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    model.w_hidden.resize(hidden_dim * input_dim);
    model.b_hidden.resize(hidden_dim);
    model.w_out.resize(hidden_dim);
    for (double& w : model.w_hidden) w = rng.next_double(-hidden_bound, hidden_bound);
    for (double& b : model.b_hidden) b = rng.next_double(-hidden_bound, hidden_bound);
    for (double& w : model.w_out) w = rng.next_double(-out_bound, out_bound);
    model.b_out = rng.next_double(-out_bound, out_bound);

    TrainResult result;
    result.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const Gradient g = loss_and_gradient(model, data);
        if (!std::isfinite(g.loss)) throw NonFiniteLoss("loss became non-finite at epoch " + std::to_string(epoch));
        result.loss_trace.push_back(g.loss);

        for (std::size_t k = 0; k < model.w_hidden.size(); ++k) model.w_hidden[k] -= cfg.learning_rate * g.w_hidden[k];
        for (std::size_t j = 0; j < hidden_dim; ++j) {
            model.b_hidden[j] -= cfg.learning_rate * g.b_hidden[j];
            model.w_out[j] -= cfg.learning_rate * g.w_out[j];
        }
        model.b_out -= cfg.learning_rate * g.b_out;
    }

    result.model = std::move(model);
    std::size_t correct = 0;
    for (const auto& s : data)
        if (predict_category(result.model, s.features) == s.category) ++correct;
    result.training_accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return result;
}

int decode_output(double output, const MlafParams& p) {
    int best = 1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int lam = 1; lam <= p.n; ++lam) {
        const double d = std::fabs(output - level_center(lam, p));
        if (d < best_dist) {  // strict: ties keep the smaller lambda
            best_dist = d;
            best = lam;
        }
    }
    return best;
}

int predict_category(const MlnnModel& model, const FeatureVector& v) {
    return decode_output(forward(model, v).output, model.mlaf_params);
}

Evaluation evaluate(const MlnnModel& model, const std::vector<LabeledRegion>& test) {
    if (test.empty()) throw EmptyTestSet("evaluate called with no samples");
    const std::size_t n = static_cast<std::size_t>(model.mlaf_params.n);
    Evaluation ev;
    ev.precision.assign(n, std::numeric_limits<double>::quiet_NaN());
    ev.predicted.assign(n, 0);
    ev.correct.assign(n, 0);
    ev.confusion.assign(n, std::vector<std::size_t>(n, 0));

    std::size_t total_correct = 0;
    for (const auto& s : test) {
        const int pred = predict_category(model, s.features);
        ev.predicted[static_cast<std::size_t>(pred - 1)]++;
        ev.confusion[static_cast<std::size_t>(s.category - 1)][static_cast<std::size_t>(pred - 1)]++;
        if (pred == s.category) {
            ev.correct[static_cast<std::size_t>(pred - 1)]++;
            ++total_correct;
        }
    }
    double sum = 0.0;
    std::size_t defined = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (ev.predicted[k] > 0) {
            ev.precision[k] = static_cast<double>(ev.correct[k]) / static_cast<double>(ev.predicted[k]);
            sum += ev.precision[k];
            ++defined;
        }
    }
    ev.average_precision = defined > 0 ? sum / static_cast<double>(defined) : 0.0;
    ev.accuracy = static_cast<double>(total_correct) / static_cast<double>(test.size());
    return ev;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_row(std::ostringstream& out, const double* row, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out << ' ';
        out << fmt17(row[i]);
    }
    out << '\n';
}

}  // namespace

std::string model_to_string(const MlnnModel& model) {
    std::ostringstream out;
    out << "RIQMLNN 1\n";
    out << "layers " << model.input_dim << ' ' << model.hidden_dim << " 1\n";
    out << "mlaf beta=" << fmt17(model.mlaf_params.beta) << " c=" << fmt17(model.mlaf_params.c)
        << " n=" << model.mlaf_params.n << '\n';
    out << "categories";
    for (const auto& cat : model.categories) out << ' ' << cat;
    out << '\n';
    out << "normalizer " << norm_mode_name(model.normalizer.mode) << '\n';
    write_row(out, model.normalizer.mean.data(), model.normalizer.mean.size());
    write_row(out, model.normalizer.stddev.data(), model.normalizer.stddev.size());
    out << "Wh\n";
    for (std::size_t j = 0; j < model.hidden_dim; ++j)
        write_row(out, &model.w_hidden[j * model.input_dim], model.input_dim);
    out << "bh\n";
    write_row(out, model.b_hidden.data(), model.b_hidden.size());
    out << "Wo\n";
    write_row(out, model.w_out.data(), model.w_out.size());
    out << "bo\n";
    write_row(out, &model.b_out, 1);
    return out.str();
}

void save_model(const MlnnModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    const std::string text = model_to_string(model);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("short write: " + path);
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t expected, const std::string& what) {
    std::istringstream in(line);
    std::vector<double> row;
    double v;
    while (in >> v) row.push_back(v);
    if (row.size() != expected)
        throw FormatError(what + ": expected " + std::to_string(expected) + " values, got " +
                          std::to_string(row.size()));
    return row;
}

std::string next_line(std::istream& in, const std::string& what) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("unexpected end of model file reading " + what);
    return line;
}

}  // namespace

MlnnModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);

    if (next_line(in, "magic") != "RIQMLNN 1") throw FormatError("bad model magic");

    MlnnModel model;
    {
        std::istringstream ls(next_line(in, "layers"));
        std::string tag;
        std::size_t out_dim = 0;
        if (!(ls >> tag >> model.input_dim >> model.hidden_dim >> out_dim) || tag != "layers" || out_dim != 1)
            throw FormatError("bad layers line");
    }
    {
        std::istringstream ls(next_line(in, "mlaf"));
        std::string tag, beta_s, c_s, n_s;
        if (!(ls >> tag >> beta_s >> c_s >> n_s) || tag != "mlaf" || beta_s.rfind("beta=", 0) != 0 ||
            c_s.rfind("c=", 0) != 0 || n_s.rfind("n=", 0) != 0)
            throw FormatError("bad mlaf line");
        model.mlaf_params.beta = std::stod(beta_s.substr(5));
        model.mlaf_params.c = std::stod(c_s.substr(2));
        model.mlaf_params.n = std::stoi(n_s.substr(2));
        model.mlaf_params.validate();
    }
    {
        std::istringstream ls(next_line(in, "categories"));
        std::string tag;
        ls >> tag;
        if (tag != "categories") throw FormatError("bad categories line");
        model.categories.clear();
        std::string cat;
        while (ls >> cat) model.categories.push_back(cat);
        if (model.categories.size() != static_cast<std::size_t>(model.mlaf_params.n))
            throw FormatError("category count does not match n");
    }
    {
        std::istringstream ls(next_line(in, "normalizer"));
        std::string tag, mode;
        if (!(ls >> tag >> mode) || tag != "normalizer") throw FormatError("bad normalizer line");
        model.normalizer.mode = norm_mode_from_name(mode);
        model.normalizer.mean = parse_row(next_line(in, "normalizer mean"), model.input_dim, "normalizer mean");
        model.normalizer.stddev =
            parse_row(next_line(in, "normalizer stddev"), model.input_dim, "normalizer stddev");
    }
    if (next_line(in, "Wh header") != "Wh") throw FormatError("missing Wh header");
    model.w_hidden.clear();
    for (std::size_t j = 0; j < model.hidden_dim; ++j) {
        const auto row = parse_row(next_line(in, "Wh row"), model.input_dim, "Wh row");
        model.w_hidden.insert(model.w_hidden.end(), row.begin(), row.end());
    }
    if (next_line(in, "bh header") != "bh") throw FormatError("missing bh header");
    model.b_hidden = parse_row(next_line(in, "bh"), model.hidden_dim, "bh");
    if (next_line(in, "Wo header") != "Wo") throw FormatError("missing Wo header");
    model.w_out = parse_row(next_line(in, "Wo"), model.hidden_dim, "Wo");
    if (next_line(in, "bo header") != "bo") throw FormatError("missing bo header");
    model.b_out = parse_row(next_line(in, "bo"), 1, "bo")[0];
    return model;
}

}  // namespace riq
