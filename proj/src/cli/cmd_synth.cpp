#include <algorithm>
#include <ostream>

#include "commands.hpp"
#include "specrev/design.hpp"
#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/synth.hpp"
#include "util.hpp"

namespace specrev::cli {
namespace {

// Noise seeds are offset so they never coincide with the composition stream.
constexpr std::uint64_t kNoiseSeedOffset = 1000003;

std::string composition_csv(const std::vector<std::string>& names, const Matrix& pct,
                            const std::vector<std::string>& labels) {
  std::string out = "sample";
  for (const auto& n : names) out += "," + io::csv_field(n);
  out += '\n';
  for (Eigen::Index i = 0; i < pct.rows(); ++i) {
    out += io::csv_field(labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < pct.cols(); ++j) out += "," + io::format_double(pct(i, j));
    out += '\n';
  }
  return out;
}

}  // namespace

int cmd_synth_material(Context& ctx, const SynthMaterialArgs& args) {
  const PipelineConfig& cfg = ctx.config;
  std::optional<synth::BandShape> shape;
  if (args.shape) {
    if (*args.shape == "gaussian") shape = synth::BandShape::gaussian;
    else if (*args.shape == "lorentzian") shape = synth::BandShape::lorentzian;
    else throw Error(ErrorKind::InvalidArgument, "shape must be gaussian or lorentzian, got '" + *args.shape + "'");
  }
  const auto axis = axis_of(cfg);
  const auto model = synth::generate_material(cfg.seed, axis, args.bands, shape, args.name);
  ensure_dir(cfg.output_dir);
  io::write_file_atomic(cfg.output_dir / (model.name + ".json"), synth::material_json(model));
  write_spectrum_csv(cfg.output_dir / (model.name + ".csv"), model.pure_spectrum(axis));
  ctx.out << "material " << model.name << ": " << model.bands.size() << " bands, seed " << cfg.seed << '\n';
  return 0;
}

int cmd_synth_mix(Context& ctx, const SynthMixArgs& args) {
  const PipelineConfig& cfg = ctx.config;
  if (args.materials.empty()) throw Error(ErrorKind::InvalidArgument, "synth mix needs at least one --material");
  const auto axis = axis_of(cfg);
  std::vector<std::string> names;
  std::vector<Spectrum> pures;
  for (const auto& p : args.materials) {
    const auto m = synth::material_from_json(io::read_file(p));
    names.push_back(m.name);
    pures.push_back(m.pure_spectrum(axis));
  }
  const auto k = static_cast<Eigen::Index>(names.size());

  Matrix comp;                        // rows × materials, proportions
  std::vector<std::string> ref_names;  // columns of the reference file
  Matrix ref;                          // rows × ref_names, proportions
  if (args.design) {
    if (!args.composition.empty()) throw Error(ErrorKind::InvalidArgument, "give either --composition or --design");
    const auto d = design::read_design_csv(*args.design);
    comp = Matrix::Zero(d.points.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
      auto it = std::find(d.components.begin(), d.components.end(), names[static_cast<std::size_t>(j)]);
      if (it == d.components.end())
        throw Error(ErrorKind::InvalidArgument, "material '" + names[static_cast<std::size_t>(j)] + "' is not a design component");
      comp.col(j) = d.points.col(it - d.components.begin());
    }
    ref_names = d.components;
    ref = d.points;
  } else {
    if (static_cast<Eigen::Index>(args.composition.size()) != k)
      throw Error(ErrorKind::CompositionInvalid, "expected " + std::to_string(k) + " composition values, got " +
                                                     std::to_string(args.composition.size()));
    if (args.vary) {
      comp = synth::variation_series(args.composition, args.count, args.vary->first, args.vary->second, cfg.seed);
    } else {
      comp = Eigen::Map<const RowVector>(args.composition.data(), k);
    }
    ref_names = names;
    ref_names.push_back(args.diluent);
    ref.resize(comp.rows(), k + 1);
    ref.leftCols(k) = comp;
    ref.col(k) = (1.0 - comp.rowwise().sum().array()).matrix();
  }
  SpectrumMatrix mixed = synth::mix_batch(pures, comp, args.sigma, cfg.seed + kNoiseSeedOffset);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < mixed.rows(); ++i) labels.push_back(args.name + "_" + std::to_string(i + 1));
  mixed = SpectrumMatrix(mixed.axis(), mixed.data(), labels);

  ensure_dir(cfg.output_dir);
  write_matrix_csv(cfg.output_dir / (args.name + ".csv"), mixed);
  io::write_file_atomic(cfg.output_dir / (args.name + "_composition.csv"), composition_csv(ref_names, ref * 100.0, labels));
  ctx.out << mixed.rows() << " mixtures of " << names.size() << " materials, sigma " << io::format_double(args.sigma)
          << ", seed " << cfg.seed << '\n';
  return 0;
}

}  // namespace specrev::cli
