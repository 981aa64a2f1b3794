#include "cap/model_io.hpp"

#include <fstream>
#include <json.hpp>

namespace cap {

namespace {

using nlohmann::json;

json to_json_value(const PartitionModel& model, const ModelMeta& meta) {
  json planes = json::array();
  for (const auto& h : model.hyperplanes) {
    json beta = json::array();
    for (Eigen::Index c = 0; c < h.beta.size(); ++c) beta.push_back(h.beta[c]);
    planes.push_back({{"alpha", h.alpha}, {"beta", std::move(beta)}});
  }
  json subsets = json::array();
  for (const auto& subset : model.subsets) {
    json rows = json::array();
    for (int idx : subset) rows.push_back(idx + 1);  // 1-based on disk
    subsets.push_back(std::move(rows));
  }
  return json{{"orientation", to_string(model.orientation)},
              {"p", model.p},
              {"hyperplanes", std::move(planes)},
              {"subsets", std::move(subsets)},
              {"meta",
               {{"D", meta.d_factor}, {"L", meta.knots}, {"seed", meta.seed}, {"n", meta.n}}}};
}

}  // namespace

std::string model_to_json(const PartitionModel& model, const ModelMeta& meta) {
  return to_json_value(model, meta).dump(2) + "\n";
}

PartitionModel model_from_json(const std::string& text, ModelMeta* meta) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model JSON parse error: ") + e.what());
  }
  try {
    PartitionModel model;
    const std::string orientation = j.at("orientation").get<std::string>();
    if (orientation == "convex")
      model.orientation = Orientation::convex;
    else if (orientation == "concave")
      model.orientation = Orientation::concave;
    else
      throw std::invalid_argument("orientation must be convex or concave");
    model.p = j.at("p").get<Eigen::Index>();

    for (const auto& plane : j.at("hyperplanes")) {
      Hyperplane h;
      h.alpha = plane.at("alpha").get<double>();
      const auto& beta = plane.at("beta");
      h.beta.resize(static_cast<Eigen::Index>(beta.size()));
      for (std::size_t c = 0; c < beta.size(); ++c)
        h.beta[static_cast<Eigen::Index>(c)] = beta[c].get<double>();
      if (h.beta.size() != model.p)
        throw std::invalid_argument("hyperplane dimension does not match p");
      model.hyperplanes.push_back(std::move(h));
    }
    for (const auto& rows : j.at("subsets")) {
      std::vector<int> subset;
      subset.reserve(rows.size());
      for (const auto& idx : rows) subset.push_back(idx.get<int>() - 1);
      model.subsets.push_back(std::move(subset));
    }
    if (model.hyperplanes.empty())
      throw std::invalid_argument("model has no hyperplanes");
    if (model.hyperplanes.size() != model.subsets.size())
      throw std::invalid_argument("subset count does not match hyperplane count");

    if (meta) {
      const auto& m = j.at("meta");
      meta->d_factor = m.at("D").get<double>();
      meta->knots = m.at("L").get<int>();
      meta->seed = m.at("seed").get<std::uint64_t>();
      meta->n = m.at("n").get<Eigen::Index>();
    }
    return model;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model JSON schema error: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const PartitionModel& model,
                const ModelMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path.string() + " for writing");
  out << model_to_json(model, meta);
}

PartitionModel load_model(const std::filesystem::path& path, ModelMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text, meta);
}

}  // namespace cap
