// Command-line entry point: run and validate experiment configs, or
// diagonalize a Pauli-text Hamiltonian directly.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dissim/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"density-matrix training harness for dissipative variational circuits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string hamiltonian_path;

    CLI::App* run_cmd = app.add_subcommand("run", "execute the experiment in a config file");
    run_cmd->add_option("config", config_path, "path to a key = value config file")
        ->required();

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "parse and validate a config file, writing nothing");
    validate_cmd->add_option("config", config_path, "path to a key = value config file")
        ->required();

    CLI::App* eig_cmd = app.add_subcommand(
        "eig", "print the ground energy of a Pauli-text Hamiltonian file");
    eig_cmd->add_option("hamiltonian", hamiltonian_path, "file with '<coeff> <string>' lines")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const dissim::RunConfig cfg = dissim::parse_config(read_file(config_path));
            const int status = dissim::run(cfg);
            std::cout << "outputs written to " << dissim::resolve_output_dir(cfg).string()
                      << (status == 0 ? "" : " (with errors, see manifest.json)") << "\n";
            return status;
        }
        if (validate_cmd->parsed()) {
            const dissim::RunConfig cfg = dissim::parse_config(read_file(config_path));
            std::cout << "valid configuration:\n" << dissim::serialize_config(cfg);
            return 0;
        }
        if (eig_cmd->parsed()) {
            const dissim::PauliHamiltonian h =
                dissim::parse_pauli_text(read_file(hamiltonian_path));
            const dissim::GroundState g = dissim::ground_energy(h);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", g.energy);
            std::cout << "n = " << h.qubit_count << "\nterms = " << h.terms.size()
                      << "\nE0 = " << buf << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
