#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "uniformize/result_document.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"discrete uniformization of triangulated planar domains"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "solve, build the net, and map onto the flat target");
    std::string mesh_path;
    run->add_option("mesh", mesh_path, "input mesh (JSON)")->required();
    double k = -1.0;
    run->add_option("--k", k, "Dirichlet constant on the outer boundary (overrides the mesh)");
    std::string out_dir = ".";
    run->add_option("--out", out_dir, "output directory");
    std::string formats = "json";
    run->add_option("--format", formats, "comma-separated: json,svg");
    bool strict = false;
    run->add_flag("--strict", strict, "abort on the first verification failure");
    bool no_verify = false;
    run->add_flag("--no-verify", no_verify, "skip verification checks (exit 0 regardless)");
    double tolerance = 1e-9;
    run->add_option("--tolerance", tolerance, "relative verification tolerance");
    std::string slit_arg = "auto";
    run->add_option("--slit", slit_arg, "auto or a comma-separated vertex-id path");
    bool perturb = false;
    run->add_flag("--perturb-ties", perturb, "break equal adjacent values by vertex id");
    bool topology = false;
    run->add_flag("--check-topology", topology, "verify conjugate level-curve topology (slow)");

    CLI11_PARSE(app, argc, argv);

    try {
        uniformize::MeshDocument doc = uniformize::load_mesh(mesh_path);
        if (k > 0) doc.k = k;

        uniformize::PipelineOptions opts;
        opts.k = doc.k;
        opts.tolerance = tolerance;
        opts.strict = strict;
        opts.verify = !no_verify;
        opts.perturb_ties = perturb;
        opts.check_topology = topology;
        if (slit_arg != "auto") {
            std::stringstream ss(slit_arg);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                opts.slit_override.push_back(std::stoi(tok));
            }
        }

        uniformize::PipelineResult result = uniformize::run_pipeline(doc, opts);

        fs::create_directories(out_dir);
        std::string stem = fs::path(mesh_path).stem().string();
        std::stringstream fmts(formats);
        std::string fmt;
        while (std::getline(fmts, fmt, ',')) {
            if (fmt == "json") {
                std::string p = (fs::path(out_dir) / (stem + ".result.json")).string();
                uniformize::write_result_json(result, p);
                std::cout << "wrote " << p << "\n";
            } else if (fmt == "svg") {
                std::string p = (fs::path(out_dir) / (stem + ".svg")).string();
                uniformize::write_result_svg(result, p);
                std::cout << "wrote " << p << "\n";
            } else {
                std::cerr << "unknown format: " << fmt << "\n";
                return 2;
            }
        }

        int failures = 0;
        for (const auto& c : result.verification.checks) {
            if (!c.pass) {
                ++failures;
                std::cerr << "FAIL " << c.name << " residual=" << c.residual << " " << c.detail
                          << "\n";
            }
        }
        if (result.connectivity == 2) {
            std::cout << "period " << result.annulus->period << ", " << result.annulus->net.cells.size()
                      << " net cells, " << result.verification.checks.size() << " checks, " << failures
                      << " failures\n";
        } else {
            std::cout << "ladder with " << result.ladder->ladder.boundary_lengths.size()
                      << " boundary components, " << result.ladder->nodes.size() << " cylinders, "
                      << failures << " check failures\n";
        }
        if (no_verify) return 0;
        return failures == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
