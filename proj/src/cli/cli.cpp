#include <CLI11.hpp>
#include <ostream>

#include "commands.hpp"
#include "specrev/error.hpp"
#include "specrev/io.hpp"

namespace specrev::cli {
namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& f : io::split_csv_line(text)) {
    double v = 0.0;
    if (!io::parse_double(f, v)) throw Error(ErrorKind::InvalidArgument, std::string("bad ") + what + " value '" + f + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> out;
  for (auto& f : io::split_csv_line(text))
    if (!f.empty()) out.push_back(f);
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral reverse engineering: identify, design, calibrate, quantify", "specrev"};
  app.require_subcommand(1);

  std::string config_path, out_dir, axis_text, library_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "settings file ([section] key = value)");
  app.add_option("--seed", seed, "seed for synthesis and ICA");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--axis", axis_text, "wavenumber axis as min,max,step");
  app.add_option("--library", library_path, "library directory");

  auto* lib = app.add_subcommand("lib", "manage the spectral library");
  lib->require_subcommand(1);
  LibAddArgs add;
  std::string dilutions;
  auto* lib_add = lib->add_subcommand("add", "add an entry from spectrum CSV files");
  lib_add->add_option("name", add.name, "entry name")->required();
  lib_add->add_option("files", add.files, "spectrum CSV files")->required()->check(CLI::ExistingFile);
  lib_add->add_option("--dilutions", dilutions, "dilution percentages, one per spectrum (e.g. 100,75,50)");
  lib_add->add_option("--inci", add.inci, "INCI name");
  lib_add->add_option("--supplier", add.supplier, "supplier");
  auto* lib_list = lib->add_subcommand("list", "list entries");
  std::string show_name;
  auto* lib_show = lib->add_subcommand("show", "show one entry");
  lib_show->add_option("name", show_name)->required();

  IdentifyArgs identify;
  auto* ident = app.add_subcommand("identify", "identify constituents of an unknown from its spectra");
  ident->add_option("files", identify.files, "spectra of the unknown (dilution series)")->required()->check(CLI::ExistingFile);

  DesignArgs design;
  std::string components, kind, bounds;
  auto* des = app.add_subcommand("design", "generate a mixture design");
  des->add_option("--components", components, "comma-separated component names")->required();
  des->add_option("--kind", kind, "centroid | centroid_augmented | lattice:<m>");
  des->add_option("--bounds", bounds, "name=lower:upper,... as proportions");

  CalibrateArgs cal;
  std::string test_design;
  auto* calib = app.add_subcommand("calibrate", "fit a PLS model from design spectra");
  calib->add_option("--design", cal.design, "design CSV")->required()->check(CLI::ExistingFile);
  calib->add_option("--spectra", cal.spectra, "calibration spectra, one per design row")->required()->check(CLI::ExistingFile);
  calib->add_option("--test-design", test_design, "held-out design CSV")->check(CLI::ExistingFile);
  calib->add_option("--test-spectra", cal.test_spectra, "held-out spectra")->check(CLI::ExistingFile);

  QuantifyArgs quant;
  std::string reference;
  auto* quan = app.add_subcommand("quantify", "predict compositions with a calibrated model");
  quan->add_option("--model", quant.model, "model directory")->required()->check(CLI::ExistingDirectory);
  quan->add_option("--spectra", quant.spectra, "spectra to quantify")->required()->check(CLI::ExistingFile);
  quan->add_option("--reference", reference, "reference compositions CSV (percent)")->check(CLI::ExistingFile);
  quan->add_flag("--clip", quant.clip, "clip predictions to [0, 100]");

  auto* syn = app.add_subcommand("synth", "generate synthetic materials and mixtures");
  syn->require_subcommand(1);
  SynthMaterialArgs smat;
  std::string shape;
  auto* syn_mat = syn->add_subcommand("material", "generate a material model and its pure spectrum");
  syn_mat->add_option("--name", smat.name, "material name");
  syn_mat->add_option("--bands", smat.bands, "band count")->check(CLI::PositiveNumber);
  syn_mat->add_option("--shape", shape, "gaussian | lorentzian");
  SynthMixArgs smix;
  std::string composition, vary, mix_design;
  auto* syn_mix = syn->add_subcommand("mix", "mix material models into spectra");
  syn_mix->add_option("--material", smix.materials, "material JSON files")->required()->check(CLI::ExistingFile);
  syn_mix->add_option("--composition", composition, "proportions, one per material");
  syn_mix->add_option("--design", mix_design, "design CSV; columns matched to material names")->check(CLI::ExistingFile);
  syn_mix->add_option("--sigma", smix.sigma, "noise sd relative to max intensity")->check(CLI::NonNegativeNumber);
  syn_mix->add_option("--vary", vary, "lo,hi per-component factors for a variation series");
  syn_mix->add_option("--count", smix.count, "spectra in the variation series")->check(CLI::PositiveNumber);
  syn_mix->add_option("--name", smix.name, "output stem");
  syn_mix->add_option("--diluent", smix.diluent, "reference column name for the remainder");

  std::vector<const char*> argv{"specrev"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.ica.seed = *seed;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!axis_text.empty()) cfg.axis = parse_axis(axis_text);
    if (!library_path.empty()) cfg.library_path = library_path;
    validate(cfg);
    Context ctx{cfg, out, err};

    if (lib_add->parsed()) {
      if (!dilutions.empty()) add.dilutions = parse_list(dilutions, "dilution");
      return cmd_lib_add(ctx, add);
    }
    if (lib_list->parsed()) return cmd_lib_list(ctx);
    if (lib_show->parsed()) return cmd_lib_show(ctx, show_name);
    if (ident->parsed()) return cmd_identify(ctx, identify);
    if (des->parsed()) {
      design.components = parse_names(components);
      if (!kind.empty()) design.kind = kind;
      if (!bounds.empty()) design.bounds = bounds;
      return cmd_design(ctx, design);
    }
    if (calib->parsed()) {
      if (!test_design.empty()) {
        if (cal.test_spectra.empty())
          throw Error(ErrorKind::InvalidArgument, "--test-design needs --test-spectra");
        cal.test_design = test_design;
      }
      return cmd_calibrate(ctx, cal);
    }
    if (quan->parsed()) {
      if (!reference.empty()) quant.reference = reference;
      return cmd_quantify(ctx, quant);
    }
    if (syn_mat->parsed()) {
      if (!shape.empty()) smat.shape = shape;
      return cmd_synth_material(ctx, smat);
    }
    if (syn_mix->parsed()) {
      if (!composition.empty()) smix.composition = parse_list(composition, "composition");
      if (!mix_design.empty()) smix.design = mix_design;
      if (!vary.empty()) {
        const auto v = parse_list(vary, "vary");
        if (v.size() != 2) throw Error(ErrorKind::InvalidArgument, "--vary takes lo,hi");
        smix.vary = std::make_pair(v[0], v[1]);
      }
      return cmd_synth_mix(ctx, smix);
    }
    err << "error: no command given\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: IoError: " << e.what() << '\n';
    return 3;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace specrev::cli
