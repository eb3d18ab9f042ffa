#include "rrcnn/examples.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "rrcnn/csv.hpp"
#include "rrcnn/envelope.hpp"
#include "rrcnn/iterative_filtering.hpp"

namespace rrcnn {

namespace {

constexpr double kPi = 3.14159265358979323846;

AnalyticSignal clean_form(ExampleId id) {
    switch (id) {
        case ExampleId::E1:
            return {"(3+2cos(2t))cos(2t^2)", [](double t) {
                        return (3.0 + 2.0 * std::cos(2.0 * t)) * std::cos(2.0 * t * t);
                    }};
        case ExampleId::E2:
            return {"(2t+cos(2t^2))cos(12t+t^2+2cos(t))", [](double t) {
                        return (2.0 * t + std::cos(2.0 * t * t)) *
                               std::cos(12.0 * t + t * t + 2.0 * std::cos(t));
                    }};
        case ExampleId::E3:
            return {"(3+2cos(3t))cos(5t^2)", [](double t) {
                        return (3.0 + 2.0 * std::cos(3.0 * t)) * std::cos(5.0 * t * t);
                    }};
        case ExampleId::E4:
            return {"(2t+cos(2t^2))cos(20t+t^2+2cos(t))", [](double t) {
                        return (2.0 * t + std::cos(2.0 * t * t)) *
                               std::cos(20.0 * t + t * t + 2.0 * std::cos(t));
                    }};
        case ExampleId::E5:
            return {"(3+2cos(3t))cos(5t^2)", [](double t) {
                        return (3.0 + 2.0 * std::cos(3.0 * t)) * std::cos(5.0 * t * t);
                    }};
        case ExampleId::E6:
            return {"cos(5pit)+cos(6.8pit)", [](double t) {
                        return std::cos(5.0 * kPi * t) + std::cos(6.8 * kPi * t);
                    }};
        case ExampleId::E7:
            return {"cos(5pit)+sin(8pit+2t^2+cos(t))", [](double t) {
                        return std::cos(5.0 * kPi * t) +
                               std::sin(8.0 * kPi * t + 2.0 * t * t + std::cos(t));
                    }};
        case ExampleId::E8:
            return {"cos(7t)+sin(9t)", [](double t) {
                        return std::cos(7.0 * t) + std::sin(9.0 * t);
                    }};
    }
    throw std::logic_error("unknown example");
}

} // namespace

ExampleId example_id_from_string(const std::string& s) {
    static const std::map<std::string, ExampleId> m = {
        {"E1", ExampleId::E1}, {"E2", ExampleId::E2}, {"E3", ExampleId::E3},
        {"E4", ExampleId::E4}, {"E5", ExampleId::E5}, {"E6", ExampleId::E6},
        {"E7", ExampleId::E7}, {"E8", ExampleId::E8}};
    auto it = m.find(s);
    if (it == m.end()) throw std::invalid_argument("unknown example id: " + s);
    return it->second;
}

std::string to_string(ExampleId id) {
    return "E" + std::to_string(static_cast<int>(id) + 1);
}

const ExampleSpec& example_spec(ExampleId id) {
    static const std::map<ExampleId, ExampleSpec> specs = [] {
        std::map<ExampleId, ExampleSpec> m;
        m[ExampleId::E1] = {ExampleId::E1, 0, 3, true, false, 0, 0, TableId::T2};
        m[ExampleId::E2] = {ExampleId::E2, 0, 3, true, false, 0, 0, TableId::T2};
        m[ExampleId::E3] = {ExampleId::E3, 0, 3, true, false, 0, 0, TableId::T2};
        m[ExampleId::E4] = {ExampleId::E4, 0, 3, true, true, 15.0, 240904, TableId::T6};
        m[ExampleId::E5] = {ExampleId::E5, 0, 3, true, true, 15.0, 240905, TableId::T6};
        m[ExampleId::E6] = {ExampleId::E6, 0, 6, false, false, 0, 0, TableId::T8};
        m[ExampleId::E7] = {ExampleId::E7, 0, 6, false, true, 15.0, 240907, TableId::T10};
        m[ExampleId::E8] = {ExampleId::E8, 0, 2.0 * kPi, false, false, 0, 0, TableId::T12};
        return m;
    }();
    return specs.at(id);
}

Signal example_signal(ExampleId id, Eigen::Index n) {
    const ExampleSpec& spec = example_spec(id);
    Signal s = sample_function(clean_form(id), spec.t0, spec.t1, n);
    if (spec.has_noise) s = add_gaussian_noise(s, spec.noise_snr_db, spec.noise_seed);
    return s;
}

std::vector<Signal> example_truth(ExampleId id, Eigen::Index n) {
    const ExampleSpec& spec = example_spec(id);
    if (spec.average_task) {
        // mono-component inputs: the labeled component is the whole clean
        // signal, so the true local average is identically zero
        Signal zero = sample_function({"zero", [](double) { return 0.0; }}, spec.t0, spec.t1, n);
        return {zero};
    }
    switch (id) {
        case ExampleId::E6:
            return {sample_function({"cos(6.8pit)",
                                     [](double t) { return std::cos(6.8 * kPi * t); }},
                                    spec.t0, spec.t1, n),
                    sample_function({"cos(5pit)",
                                     [](double t) { return std::cos(5.0 * kPi * t); }},
                                    spec.t0, spec.t1, n)};
        case ExampleId::E7:
            return {sample_function({"sin(8pit+2t^2+cos(t))",
                                     [](double t) {
                                         return std::sin(8.0 * kPi * t + 2.0 * t * t +
                                                         std::cos(t));
                                     }},
                                    spec.t0, spec.t1, n),
                    sample_function({"cos(5pit)",
                                     [](double t) { return std::cos(5.0 * kPi * t); }},
                                    spec.t0, spec.t1, n)};
        case ExampleId::E8:
            return {sample_function({"sin(9t)", [](double t) { return std::sin(9.0 * t); }},
                                    spec.t0, spec.t1, n),
                    sample_function({"cos(7t)", [](double t) { return std::cos(7.0 * t); }},
                                    spec.t0, spec.t1, n)};
        default: throw std::logic_error("decomposition truth requested for average example");
    }
}

std::vector<std::string> example_truth_names(ExampleId id) {
    if (example_spec(id).average_task) return {"avg"};
    return {"c1", "c2"};
}

namespace {

std::vector<Signal> predict_components(const std::string& method, ExampleId id,
                                       const Signal& input,
                                       const std::map<std::string, ModelParams>& trained,
                                       size_t want) {
    const ExampleSpec& spec = example_spec(id);
    if (method == "rrcnn") {
        const std::string table = to_string(spec.training_table);
        auto it = trained.find(table);
        if (it == trained.end())
            throw std::runtime_error("run_example: no trained model for table " + table);
        CascadeResult fwd = cascade_forward(input.samples, it->second);
        if (spec.average_task)
            return {with_samples(input, input.samples - fwd.outputs[0])};
        if (fwd.outputs.size() < want)
            throw std::runtime_error("run_example: model produces " +
                                     std::to_string(fwd.outputs.size()) +
                                     " components, need " + std::to_string(want));
        std::vector<Signal> out;
        for (size_t i = 0; i < want; ++i) out.push_back(with_samples(input, fwd.outputs[i]));
        return out;
    }
    if (method == "if") {
        IfConfig cfg;
        if (spec.average_task) {
            SiftResult s = if_extract_imf(input, cfg);
            return {with_samples(input, input.samples - s.imf.samples)};
        }
        DecompositionResult dec = if_decompose(input, cfg);
        if (dec.imfs.size() < want)
            throw std::runtime_error("run_example: IF produced only " +
                                     std::to_string(dec.imfs.size()) + " IMFs");
        return {dec.imfs.begin(), dec.imfs.begin() + static_cast<long>(want)};
    }
    if (method == "csa") {
        if (!spec.average_task)
            throw std::invalid_argument("run_example: csa is an average-only method");
        return {csa_average(input)};
    }
    throw std::invalid_argument("run_example: unknown method '" + method + "'");
}

} // namespace

ExampleRun run_example(ExampleId id, const std::set<std::string>& methods,
                       const std::map<std::string, ModelParams>& trained, Eigen::Index n) {
    ExampleRun run;
    run.id = id;
    run.input = example_signal(id, n);
    run.truth = example_truth(id, n);
    run.truth_names = example_truth_names(id);

    for (const std::string& method : methods) {
        auto pred = predict_components(method, id, run.input, trained, run.truth.size());
        std::optional<double> pair_rho;
        if (pred.size() >= 2) pair_rho = rho(pred[0], pred[1]);
        for (size_t c = 0; c < run.truth.size(); ++c) {
            MetricReport rep;
            rep.method = method;
            rep.example = to_string(id);
            rep.component = run.truth_names[c];
            rep.mae_value = mae(pred[c], run.truth[c]);
            rep.rmse_value = rmse(pred[c], run.truth[c]);
            rep.rho_value = pair_rho;
            if (rep.rmse_value < rep.mae_value)
                throw std::logic_error("metric sanity violated: RMSE < MAE");
            run.reports.push_back(std::move(rep));
        }
        run.predictions[method] = std::move(pred);
    }
    return run;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricReport>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "method,example,component,mae,rmse,rho\n";
    for (const auto& r : rows) {
        f << r.method << "," << r.example << "," << r.component << ","
          << format_g17(r.mae_value) << "," << format_g17(r.rmse_value) << ",";
        if (r.rho_value) f << format_g17(*r.rho_value);
        f << "\n";
    }
}

void write_plot_csv(const std::string& path, const ExampleRun& run) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "t,input";
    for (const auto& name : run.truth_names) f << ",truth_" << name;
    for (const auto& [method, _] : run.predictions)
        for (const auto& name : run.truth_names) f << "," << method << "_" << name;
    f << "\n";
    for (Eigen::Index k = 0; k < run.input.size(); ++k) {
        f << format_g17(run.input.time(k)) << "," << format_g17(run.input.samples[k]);
        for (const auto& tr : run.truth) f << "," << format_g17(tr.samples[k]);
        for (const auto& [_, pred] : run.predictions)
            for (const auto& comp : pred) f << "," << format_g17(comp.samples[k]);
        f << "\n";
    }
}

BenchRow bench_decompose(const ModelParams& p, const Signal& x, int copies, int threads) {
    if (copies < 1) throw std::invalid_argument("bench: copies must be >= 1");
    if (threads < 1) throw std::invalid_argument("bench: threads must be >= 1");
    // one warmup decomposition outside the timed region
    volatile double sink = cascade_forward(x.samples, p).residue.sum();
    (void)sink;

    const auto start = std::chrono::steady_clock::now();
    if (threads == 1) {
        for (int i = 0; i < copies; ++i) {
            volatile double s = cascade_forward(x.samples, p).residue.sum();
            (void)s;
        }
    } else {
        std::vector<std::thread> pool;
        const int lanes = std::min(threads, copies);
        pool.reserve(lanes);
        for (int w = 0; w < lanes; ++w)
            pool.emplace_back([&, w]() {
                for (int i = w; i < copies; i += lanes) {
                    volatile double s = cascade_forward(x.samples, p).residue.sum();
                    (void)s;
                }
            });
        for (auto& t : pool) t.join();
    }
    const auto stop = std::chrono::steady_clock::now();
    BenchRow row;
    row.copies = copies;
    row.threads = threads;
    row.seconds = std::chrono::duration<double>(stop - start).count();
    return row;
}

} // namespace rrcnn
