// starkspec: command-line front end

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "commands.hpp"
#include "starkspec/errors.hpp"

namespace {

using namespace starkspec::cli;

// Single JSON document. Top-level scalars apply to the selected subcommand; an object
// keyed by a subcommand name applies to that subcommand only.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::string active) : active_(std::move(active)) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [k, v] : value.items()) items.push_back(item({key}, k, v));
            } else {
                items.push_back(item({active_}, key, value));
            }
        }
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConfigError("config values must be scalars or arrays of scalars");
    }

    static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& name,
                                const nlohmann::json& v) {
        CLI::ConfigItem it;
        it.parents = std::move(parents);
        it.name = name;
        if (v.is_array())
            for (const auto& e : v) it.inputs.push_back(scalar(e));
        else
            it.inputs.push_back(scalar(v));
        return it;
    }

    std::string active_;
};

void common(CLI::App* s, RunConfig& c) {
    s->add_option("--delta", c.delta, "two-level splitting (units of omega)")->capture_default_str();
    s->add_option("--gamma", c.gamma, "Stark coupling, gamma^2 < 1")->capture_default_str();
    s->add_option("--nterms", c.n_terms, "series terms (minimum when adaptive)")
        ->capture_default_str();
    s->add_flag("--fixed-terms", c.fixed_terms, "truncate at exactly --nterms terms");
    s->add_flag("--strict", c.strict, "repeat with doubled term count and flag unstable values");
    s->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    s->add_option("--out", c.out, "output path, '-' for stdout")->capture_default_str();
}

void roots(CLI::App* s, RunConfig& c) {
    s->add_option("--estep", c.e_step, "energy scan step")->capture_default_str();
    s->add_option("--tolE", c.tol_e, "root tolerance in E")->capture_default_str();
    s->add_option("--pole-window", c.pole_halfwidth, "pole exclusion half-width in E")
        ->capture_default_str();
    s->add_option("--graze", c.graze, "grazing threshold on |G|")->capture_default_str();
    s->add_option("--tolV", c.tol_v, "degenerate exceptional threshold")->capture_default_str();
    s->add_option("--threads", c.threads, "worker threads, 0 for all cores")->capture_default_str();
}

void g_range(CLI::App* s, RunConfig& c) {
    s->add_option("--gmin", c.g_min)->capture_default_str();
    s->add_option("--gmax", c.g_max)->capture_default_str();
    s->add_option("--gsteps", c.g_steps, "number of g columns")->capture_default_str();
    s->add_option("--levels", c.levels, "levels per column")->default_str("14");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Exact spectrum of the quantum Rabi-Stark model", "starkspec"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.fallthrough();  // inherited by subcommands, so --config may follow the subcommand

    const std::map<std::string, std::function<int(const RunConfig&)>> handlers{
        {"gfun", run_gfun},       {"spectrum", run_spectrum}, {"poles", run_poles},
        {"crossings", run_crossings}, {"oracle", run_oracle},  {"compare", run_compare}};

    auto* gfun = app.add_subcommand("gfun", "G+ and G- on a grid in x = E + g^2");
    common(gfun, c);
    gfun->add_option("--g", c.g, "Rabi coupling")->capture_default_str();
    auto* xmin = gfun->add_option("--xmin", c.x_min)->capture_default_str();
    auto* xmax = gfun->add_option("--xmax", c.x_max)->capture_default_str();
    auto* emin = gfun->add_option("--emin", c.e_min);
    auto* emax = gfun->add_option("--emax", c.e_max);
    emin->needs(emax);
    emax->needs(emin);
    for (auto* e : {emin, emax})
        for (auto* x : {xmin, xmax}) e->excludes(x);
    gfun->add_option("--grid", c.grid, "number of samples")->capture_default_str();

    auto* spectrum = app.add_subcommand("spectrum", "levels over a g sweep");
    common(spectrum, c);
    roots(spectrum, c);
    g_range(spectrum, c);

    auto* poles = app.add_subcommand("poles", "pole energies and their classification");
    common(poles, c);
    poles->add_option("--g", c.g)->capture_default_str();
    poles->add_option("--nmax", c.n_max)->capture_default_str();
    poles->add_option("--tolV", c.tol_v, "degenerate exceptional threshold")->capture_default_str();

    auto* crossings = app.add_subcommand("crossings", "crossing events over a g sweep");
    common(crossings, c);
    roots(crossings, c);
    g_range(crossings, c);
    crossings->add_option("--threshold", c.threshold, "near-degeneracy gap threshold")
        ->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "truncated Fock-space diagonalization");
    common(oracle, c);
    oracle->add_option("--g", c.g)->capture_default_str();
    oracle->add_option("--levels", c.levels, "number of levels")->default_str("10");
    oracle->add_option("--cutoff", c.cutoff, "photon-number cutoff")->capture_default_str();

    auto* compare = app.add_subcommand("compare", "series levels against the oracle");
    common(compare, c);
    roots(compare, c);
    compare->add_option("--g", c.g)->capture_default_str();
    compare->add_option("--levels", c.levels, "levels per parity")->default_str("10");
    compare->add_option("--cutoff", c.cutoff, "photon-number cutoff")->capture_default_str();
    compare->add_option("--tol", c.tol, "maximum allowed |diff|")->capture_default_str();

    // The config formatter needs the subcommand before parsing; a missing one is reported
    // by the parser itself.
    std::string active;
    for (int i = 1; i < argc && active.empty(); ++i)
        if (handlers.count(argv[i])) active = argv[i];
    app.set_config("--config", "", "JSON config file (flags take precedence)");
    app.config_formatter(std::make_shared<JsonConfig>(active));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    c.energy_window = emin->count() > 0;
    c.subcommand = app.get_subcommands().front()->get_name();
    try {
        return handlers.at(c.subcommand)(c);
    } catch (const starkspec::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSoftFailure;
    }
}
