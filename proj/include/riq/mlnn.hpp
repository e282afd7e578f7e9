#ifndef RIQ_MLNN_HPP
#define RIQ_MLNN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "riq/features.hpp"

namespace riq {

// Parameters of the multi-level sigmoid activation
//   phi(x) = f(x) + (lambda - 1) f(c),  lambda = clamp(ceil(x/c), 1, n),
// where f is the sigmoid with steepness beta. One output neuron with this
// activation emits n distinguishable response levels.
// Defaults are the trainable operating point: gradient descent has to walk
// the pre-activation across all n windows, and the usable gradient there
// decays like exp(-beta*n*c), so beta*n*c is kept near 6.
struct MlafParams {
    double beta = 1.0;
    double c = 1.2;
    int n = 5;

    void validate() const;
};

double sigmoid(double x, double beta);
double mlaf(double x, const MlafParams& p);

// d(phi)/dx away from window boundaries; the per-window offset is constant
// and contributes nothing. Boundaries use the same formula (one-sided).
double mlaf_grad(double x, const MlafParams& p);

// Output value targeted for category lambda and used as the decode anchor.
double level_center(int lambda, const MlafParams& p);

inline const std::vector<std::string> kCategories = {"Sky", "Building", "Sand/Rock", "Grass", "Water"};

// 201-32-1 network: one standard-sigmoid hidden layer, one MLAF output
// neuron. The output pre-activation is clamped to [0, n*c], the domain on
// which the MLAF is defined.
struct MlnnModel {
    std::size_t input_dim = kFeatureLength;
    std::size_t hidden_dim = 32;
    std::vector<double> w_hidden;  // hidden_dim x input_dim, row-major
    std::vector<double> b_hidden;  // hidden_dim
    std::vector<double> w_out;     // hidden_dim
    double b_out = 0.0;
    MlafParams mlaf_params;
    Normalizer normalizer;
    std::vector<std::string> categories = kCategories;
    std::uint64_t rng_seed = 0;
};

struct ForwardResult {
    double output = 0.0;
    double pre_activation = 0.0;  // after clamping
    std::vector<double> hidden;
};

ForwardResult forward(const MlnnModel& model, const FeatureVector& v);

struct TrainConfig {
    double learning_rate = 1.5;
    int epochs = 8000;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct LabeledRegion {
    FeatureVector features;  // already normalized
    int category = 1;        // lambda in 1..n
};

// Batch MSE and its gradient with respect to every network parameter;
// what one epoch of gradient descent steps along.
struct Gradient {
    std::vector<double> w_hidden;
    std::vector<double> b_hidden;
    std::vector<double> w_out;
    double b_out = 0.0;
    double loss = 0.0;
};

Gradient loss_and_gradient(const MlnnModel& model, const std::vector<LabeledRegion>& batch);

struct TrainResult {
    MlnnModel model;
    std::vector<double> loss_trace;  // MSE per epoch
    double training_accuracy = 0.0;
};

// Full-batch gradient descent on MSE against the level-center targets.
// Deterministic given cfg.rng_seed. The model's normalizer is left empty;
// callers attach the one fitted on their training features.
TrainResult train(const std::vector<LabeledRegion>& data, const TrainConfig& cfg, const MlafParams& p,
                  std::size_t input_dim = kFeatureLength, std::size_t hidden_dim = 32);

// Nearest level center; ties decode to the smaller lambda.
int decode_output(double output, const MlafParams& p);
int predict_category(const MlnnModel& model, const FeatureVector& v);

struct Evaluation {
    std::vector<double> precision;       // per category, NaN when never predicted
    std::vector<std::size_t> predicted;  // regions predicted as each category
    std::vector<std::size_t> correct;
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
    double average_precision = 0.0;      // macro average over defined categories
    double accuracy = 0.0;
};

Evaluation evaluate(const MlnnModel& model, const std::vector<LabeledRegion>& test);

// Textual model file, exact line-oriented format; round-trips bit-exactly.
void save_model(const MlnnModel& model, const std::string& path);
MlnnModel load_model(const std::string& path);
std::string model_to_string(const MlnnModel& model);

}  // namespace riq

#endif
