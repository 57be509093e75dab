#include "commands.hpp"

#include "morse/document.hpp"
#include "morse/error.hpp"
#include "morse/ingestion.hpp"
#include "morse/pipeline.hpp"
#include "morse/projection.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace morse::cli {

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MORSE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidInput(fmt::format("MORSE_SEED='{}' is not an unsigned integer", env));
    }
  }
  return 0;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

void require_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw InvalidInput(fmt::format("input file '{}' does not exist", path.string()));
}

bool looks_like_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  char c = 0;
  while (in.get(c))
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
  return false;
}

// "x,y;x,y" -> list of vectors
std::vector<Vector> parse_centers(const std::string& text) {
  std::vector<Vector> centers;
  std::stringstream groups(text);
  for (std::string group; std::getline(groups, group, ';');) {
    const PointCloud one = parse_point_cloud(group);
    centers.emplace_back(one.point(0));
  }
  return centers;
}

std::vector<double> parse_list(const std::string& text) {
  if (text.empty()) return {};
  const PointCloud row = parse_point_cloud(text);
  return {row.matrix().data(), row.matrix().data() + row.matrix().size()};
}

}  // namespace

std::string analyze(const AnalyzeOptions& options) {
  require_file(options.input);
  PipelineConfig config;
  if (options.config) {
    require_file(*options.config);
    config = read_config(*options.config);
  }
  if (std::getenv("MORSE_SEED")) config.seed = default_seed();
  if (options.seed) config.seed = *options.seed;

  const PointCloud cloud = read_point_cloud(options.input);
  PipelineResult result = run(cloud, config, std::max<std::size_t>(options.threads, 1));
  write_document({result.filtration, config}, options.output);
  std::string text = format_report(result.filtration, result.report);
  if (options.report) write_text(*options.report, text);
  return text;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cell-complex models of the dense regions of point clouds"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  std::string output;

  AnalyzeOptions analyze_options;
  std::string analyze_input, analyze_config, analyze_report;
  auto* analyze_cmd = app.add_subcommand("analyze", "Build the filtration of a point-cloud CSV");
  analyze_cmd->add_option("input", analyze_input, "Point-cloud CSV")->required();
  analyze_cmd->add_option("-c,--config", analyze_config, "Config file (key = value)");
  analyze_cmd->add_option("-o,--output", output, "Filtration document to write")->required();
  analyze_cmd->add_option("--report", analyze_report, "Also write the report to this file");
  analyze_cmd->add_option("--threads", analyze_options.threads, "Worker threads")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--seed", seed, "Master seed (overrides MORSE_SEED and the config)");

  std::string document_path;
  double threshold = 0.0;
  auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of Z^a");
  betti_cmd->add_option("document", document_path, "Filtration document")->required();
  betti_cmd->add_option("-a,--threshold", threshold, "Density threshold a")->required();
  betti_cmd->add_option("--seed", seed, "Ignored");

  auto* persistence_cmd = app.add_subcommand("persistence", "Loop persistence intervals");
  persistence_cmd->add_option("document", document_path, "Filtration document")->required();
  persistence_cmd->add_option("--seed", seed, "Ignored");

  std::string project_input, basis = "pca", fit_cloud;
  std::vector<std::size_t> coords;
  auto* project_cmd = app.add_subcommand("project", "Project a cloud or document to the plane");
  project_cmd->add_option("input", project_input, "Point-cloud CSV or filtration document")->required();
  project_cmd->add_option("-o,--output", output, "CSV to write")->required();
  project_cmd->add_option("--basis", basis, "pca or coords")->check(CLI::IsMember({"pca", "coords"}));
  project_cmd->add_option("--coords", coords, "Coordinate indices i j")->expected(2);
  project_cmd->add_option("--cloud", fit_cloud, "Fit PCA on this cloud and include its points");
  project_cmd->add_option("--seed", seed, "Ignored");

  std::string kind;
  SynthParams synth_params;
  std::string centers, scales, weights;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic point cloud");
  synth_cmd->add_option("kind", kind, "gaussian_mixture, noisy_circle or bumpy_circle")->required();
  synth_cmd->add_option("-o,--output", output, "CSV to write")->required();
  synth_cmd->add_option("--count", synth_params.count, "Number of points");
  synth_cmd->add_option("--dim", synth_params.dim, "Ambient dimension (circles)");
  synth_cmd->add_option("--radius", synth_params.radius, "Circle radius");
  synth_cmd->add_option("--noise", synth_params.noise, "Isotropic noise standard deviation");
  synth_cmd->add_option("--bumps", synth_params.bumps, "Number of bumps");
  synth_cmd->add_option("--bump-width", synth_params.bump_width, "Angular spread of each bump (radians)");
  synth_cmd->add_option("--base-fraction", synth_params.base_fraction, "Share of points spread uniformly");
  synth_cmd->add_option("--phase", synth_params.phase, "Angle of the first bump");
  synth_cmd->add_option("--centers", centers, "Mixture centers 'x,y;x,y'");
  synth_cmd->add_option("--scales", scales, "Mixture scales 's1,s2'");
  synth_cmd->add_option("--weights", weights, "Mixture weights 'w1,w2'");
  synth_cmd->add_option("--seed", seed, "Random seed");

  std::string graph_path;
  MdsOptions mds;
  auto* embed_cmd = app.add_subcommand("embed-graph", "Embed a graph by stress majorization");
  embed_cmd->add_option("graph", graph_path, "Graph file")->required();
  embed_cmd->add_option("-o,--output", output, "CSV to write")->required();
  embed_cmd->add_option("--dim", mds.target_dim, "Target dimension");
  embed_cmd->add_option("--max-iter", mds.max_iterations, "Iteration cap");
  embed_cmd->add_option("--tol", mds.tolerance, "Relative stress decrease tolerance");
  embed_cmd->add_option("--seed", seed, "Random seed");

  std::vector<std::string> raster_paths;
  std::string modality = "optical";
  PatchConfig patch_config;
  auto* patches_cmd = app.add_subcommand("preprocess-patches", "High-contrast normalized patches in DCT coordinates");
  patches_cmd->add_option("rasters", raster_paths, "Raster CSVs (flow: base paths with .u/.v files)")->required();
  patches_cmd->add_option("-o,--output", output, "CSV to write")->required();
  patches_cmd->add_option("--modality", modality, "optical, range or flow");
  patches_cmd->add_option("--side", patch_config.side, "Patch side (3 or 5)");
  patches_cmd->add_option("--quantile", patch_config.quantile, "Top contrast fraction to keep");
  patches_cmd->add_option("--sample", patch_config.sample_size, "Number of patches sampled");
  patches_cmd->add_option("--seed", seed, "Random seed");

  std::string series_path;
  std::size_t window = 5;
  auto* window_cmd = app.add_subcommand("sliding-window", "Delay-embed a variables x time CSV");
  window_cmd->add_option("series", series_path, "Time-series CSV, one variable per row")->required();
  window_cmd->add_option("-o,--output", output, "CSV to write")->required();
  window_cmd->add_option("--window", window, "Window length");
  window_cmd->add_option("--seed", seed, "Ignored");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    auto rng = [&] { return Rng(seed ? *seed : default_seed()); };
    if (analyze_cmd->parsed()) {
      analyze_options.input = analyze_input;
      if (!analyze_config.empty()) analyze_options.config = analyze_config;
      if (!analyze_report.empty()) analyze_options.report = analyze_report;
      analyze_options.output = output;
      analyze_options.seed = seed;
      out << analyze(analyze_options);
    } else if (betti_cmd->parsed()) {
      require_file(document_path);
      const auto doc = read_document(document_path);
      const Betti b = betti_at(doc.filtration, threshold);
      out << fmt::format("b0={} b1={}\n", b.b0, b.b1);
    } else if (persistence_cmd->parsed()) {
      require_file(document_path);
      const auto doc = read_document(document_path);
      out << "birth,death,lifespan\n";
      for (const auto& loop : loop_persistence(doc.filtration))
        out << fmt::format("{:.17g},{:.17g},{:.17g}\n", loop.birth, loop.death, loop.lifespan);
    } else if (project_cmd->parsed()) {
      require_file(project_input);
      const bool by_coords = basis == "coords" || !coords.empty();
      if (by_coords && coords.size() != 2) throw InvalidInput("--coords needs two indices");
      std::string text;
      if (looks_like_document(project_input)) {
        const auto doc = read_document(project_input);
        std::vector<Vector> all;
        for (const auto& cell : doc.filtration.cells()) all.insert(all.end(), cell.geometry.begin(), cell.geometry.end());
        if (all.empty()) throw InvalidInput("document has no geometry to project");
        std::optional<PointCloud> cloud;
        if (!fit_cloud.empty()) {
          require_file(fit_cloud);
          cloud = read_point_cloud(fit_cloud);
        }
        const Matrix fit = cloud ? cloud->matrix() : PointCloud::from_points(all).matrix();
        const auto dim = static_cast<std::size_t>(fit.rows());
        const PlaneProjection plane = by_coords ? coordinate_projection(dim, coords[0], coords[1]) : fit_pca(fit);
        text += "dim,cell,node,x,y\n";
        if (cloud)
          for (std::size_t i = 0; i < cloud->size(); ++i) {
            const auto p = plane.apply(cloud->point(i));
            text += fmt::format("-1,-1,{},{:.17g},{:.17g}\n", i, p(0), p(1));
          }
        for (const auto& cell : doc.filtration.cells())
          for (std::size_t k = 0; k < cell.geometry.size(); ++k) {
            const auto p = plane.apply(cell.geometry[k]);
            text += fmt::format("{},{},{},{:.17g},{:.17g}\n", cell.dim, cell.id, k, p(0), p(1));
          }
      } else {
        const PointCloud cloud = read_point_cloud(project_input);
        const PlaneProjection plane =
            by_coords ? coordinate_projection(cloud.dimension(), coords[0], coords[1]) : fit_pca(cloud.matrix());
        Matrix projected(2, static_cast<Eigen::Index>(cloud.size()));
        for (std::size_t i = 0; i < cloud.size(); ++i) projected.col(static_cast<Eigen::Index>(i)) = plane.apply(cloud.point(i));
        text = format_point_cloud(PointCloud(std::move(projected)));
      }
      write_text(output, text);
    } else if (synth_cmd->parsed()) {
      if (!centers.empty()) synth_params.centers = parse_centers(centers);
      synth_params.scales = parse_list(scales);
      synth_params.weights = parse_list(weights);
      Rng r = rng();
      write_point_cloud(synth(parse_synth_kind(kind), synth_params, r), output);
    } else if (embed_cmd->parsed()) {
      require_file(graph_path);
      Rng r = rng();
      const MdsResult result = mds_embed(shortest_path_distances(read_graph(graph_path)), mds, r);
      write_point_cloud(result.embedding, output);
      out << fmt::format("stress {:.6e} after {} iterations\n", result.stress, result.iterations);
    } else if (patches_cmd->parsed()) {
      patch_config.modality = parse_modality(modality);
      std::vector<Raster> rasters;
      for (const auto& path : raster_paths) {
        Raster raster{path, {}};
        if (patch_config.modality == Modality::flow) {
          for (const char* suffix : {".u", ".v"}) {
            require_file(path + suffix);
            raster.channels.push_back(read_matrix(path + suffix));
          }
        } else {
          require_file(path);
          raster.channels.push_back(read_matrix(path));
        }
        rasters.push_back(std::move(raster));
      }
      Rng r = rng();
      const PointCloud cloud = preprocess_patches(rasters, patch_config, r);
      write_point_cloud(cloud, output);
      out << fmt::format("{} patches in R^{}\n", cloud.size(), cloud.dimension());
    } else if (window_cmd->parsed()) {
      require_file(series_path);
      write_point_cloud(sliding_window(read_matrix(series_path), window), output);
    }
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return no_convergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return data_error;
  }
  return ok;
}

}  // namespace morse::cli
