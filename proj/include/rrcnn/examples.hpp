#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rrcnn/generators.hpp"
#include "rrcnn/metrics.hpp"
#include "rrcnn/model.hpp"

namespace rrcnn {

enum class ExampleId { E1, E2, E3, E4, E5, E6, E7, E8 };

ExampleId example_id_from_string(const std::string& s);
std::string to_string(ExampleId id);

// Static description of one benchmark signal: its closed form, domain, task
// kind (local average vs two-component decomposition), noise level with a
// pinned seed, and the dataset its models are trained on.
struct ExampleSpec {
    ExampleId id;
    double t0 = 0.0;
    double t1 = 3.0;
    bool average_task = true;
    bool has_noise = false;
    double noise_snr_db = 0.0;
    uint64_t noise_seed = 0;
    TableId training_table = TableId::T2;
};

const ExampleSpec& example_spec(ExampleId id);

// The test signal (noise applied for E4/E5/E7) on an N-point grid.
Signal example_signal(ExampleId id, Eigen::Index n);

// Ground-truth targets: the zero average for the mono-component examples,
// the two clean components (faster first) for the decomposition examples.
std::vector<Signal> example_truth(ExampleId id, Eigen::Index n);
std::vector<std::string> example_truth_names(ExampleId id);

// One full comparison run: every requested method is applied to the example
// signal and scored against the ground truth.
struct ExampleRun {
    ExampleId id;
    Signal input;
    std::vector<Signal> truth;
    std::vector<std::string> truth_names;
    // method -> predicted stack, aligned with truth
    std::map<std::string, std::vector<Signal>> predictions;
    std::vector<MetricReport> reports;
};

// methods may contain "rrcnn", "if", "csa" (csa only for average examples).
// RRCNN rows need a trained model for the example's table in `trained`,
// keyed by table id string ("T2", ...).
ExampleRun run_example(ExampleId id, const std::set<std::string>& methods,
                       const std::map<std::string, ModelParams>& trained, Eigen::Index n);

void write_metrics_csv(const std::string& path, const std::vector<MetricReport>& rows);
void write_plot_csv(const std::string& path, const ExampleRun& run);

// Wall-clock of decomposing `copies` duplicates of a signal with a fixed
// number of concurrent lanes sharing the read-only model.
struct BenchRow {
    int copies = 0;
    int threads = 0;
    double seconds = 0.0;
};
BenchRow bench_decompose(const ModelParams& p, const Signal& x, int copies, int threads);

} // namespace rrcnn
