// Copyright 2026 The JPPF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "jppf/bench.hpp"
#include "jppf/catalog.hpp"
#include "jppf/detection.hpp"
#include "jppf/errors.hpp"
#include "jppf/fusion.hpp"
#include "jppf/io.hpp"
#include "jppf/merge.hpp"
#include "jppf/metrics.hpp"
#include "jppf/synth.hpp"
#include "jppf/viz.hpp"

namespace py = pybind11;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using U16Array =
    py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;

jppf::Tensor tensor_from_array(const FloatArray& arr) {
  std::vector<std::size_t> dims(arr.ndim());
  for (py::ssize_t i = 0; i < arr.ndim(); ++i) {
    dims[i] = static_cast<std::size_t>(arr.shape(i));
  }
  std::vector<float> data(arr.data(), arr.data() + arr.size());
  return jppf::Tensor(std::move(dims), std::move(data));
}

py::array_t<float> array_from_tensor(const jppf::Tensor& t) {
  std::vector<py::ssize_t> shape(t.dims().begin(), t.dims().end());
  py::array_t<float> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

py::array_t<std::uint16_t> plane_to_array(const std::vector<std::uint16_t>& v,
                                          int height, int width) {
  py::array_t<std::uint16_t> out({height, width});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

jppf::LabelMap label_map_from_arrays(const U16Array& semantic,
                                     const U16Array& part,
                                     const U16Array& instance) {
  if (semantic.ndim() != 2 || part.ndim() != 2 || instance.ndim() != 2 ||
      semantic.shape(0) != part.shape(0) ||
      semantic.shape(0) != instance.shape(0) ||
      semantic.shape(1) != part.shape(1) ||
      semantic.shape(1) != instance.shape(1)) {
    throw jppf::ShapeError("label map planes must share an HxW shape");
  }
  jppf::LabelMap map(static_cast<int>(semantic.shape(1)),
                     static_cast<int>(semantic.shape(0)));
  std::copy(semantic.data(), semantic.data() + semantic.size(),
            map.semantic.begin());
  std::copy(part.data(), part.data() + part.size(), map.part.begin());
  std::copy(instance.data(), instance.data() + instance.size(),
            map.instance.begin());
  return map;
}

jppf::Detection make_detection(int class_id, float score,
                               std::tuple<int, int, int, int> box,
                               const FloatArray& mask_logits) {
  if (mask_logits.ndim() != 2) {
    throw jppf::ShapeError("mask logits must be a 2-d array");
  }
  jppf::Detection det;
  det.class_id = class_id;
  det.score = score;
  det.box = {std::get<0>(box), std::get<1>(box), std::get<2>(box),
             std::get<3>(box)};
  det.mask_logits = jppf::Tensor(
      {1, static_cast<std::size_t>(mask_logits.shape(0)),
       static_cast<std::size_t>(mask_logits.shape(1))},
      std::vector<float>(mask_logits.data(),
                         mask_logits.data() + mask_logits.size()));
  jppf::require_valid(det);
  return det;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Panoptic-part fusion engine: joint fusion, top-down merge "
            "baseline, metrics, and synthetic scenes";

  py::register_exception<jppf::FormatError>(m, "FormatError");
  py::register_exception<jppf::ParseError>(m, "ParseError");
  py::register_exception<jppf::CatalogError>(m, "CatalogError");
  py::register_exception<jppf::GenerationError>(m, "GenerationError");
  py::register_exception<jppf::IoError>(m, "IoError");

  py::enum_<jppf::ClassKind>(m, "ClassKind")
      .value("STUFF", jppf::ClassKind::kStuff)
      .value("THING", jppf::ClassKind::kThing);

  py::class_<jppf::ClassDef>(m, "ClassDef")
      .def_readonly("class_id", &jppf::ClassDef::class_id)
      .def_readonly("name", &jppf::ClassDef::name)
      .def_readonly("kind", &jppf::ClassDef::kind)
      .def_readonly("part_channel_ids", &jppf::ClassDef::part_channel_ids)
      .def_property_readonly("partitionable", &jppf::ClassDef::partitionable);

  py::class_<jppf::ClassCatalog>(m, "ClassCatalog")
      .def_property_readonly("classes", &jppf::ClassCatalog::classes)
      .def_property_readonly("n_part_channels",
                             &jppf::ClassCatalog::n_part_channels)
      .def_property_readonly("num_classes", &jppf::ClassCatalog::num_classes)
      .def_property_readonly("num_stuff", &jppf::ClassCatalog::num_stuff)
      .def_property_readonly("num_things", &jppf::ClassCatalog::num_things)
      .def("has_class", &jppf::ClassCatalog::has_class)
      .def("channel_of", &jppf::ClassCatalog::channel_of)
      .def("__repr__", [](const jppf::ClassCatalog& c) {
        std::ostringstream s;
        s << "ClassCatalog(" << c.num_classes() << " classes, "
          << c.n_part_channels() << " part channels)";
        return s.str();
      });

  m.def("preset_catalog", &jppf::preset_catalog, py::arg("name"));
  m.def("load_catalog", &jppf::load_catalog, py::arg("path"));
  m.def("save_catalog", &jppf::save_catalog, py::arg("path"),
        py::arg("catalog"));
  m.def("part_channels_for_class", &jppf::part_channels_for_class,
        py::arg("catalog"), py::arg("class_id"));
  m.def(
      "validate_catalog",
      [](const jppf::ClassCatalog& catalog) {
        std::vector<std::pair<int, std::string>> out;
        for (const auto& v : jppf::validate_catalog(catalog)) {
          out.emplace_back(v.class_id, v.message);
        }
        return out;
      },
      py::arg("catalog"));

  py::class_<jppf::FusionConfig>(m, "FusionConfig")
      .def(py::init<>())
      .def_readwrite("confidence_threshold",
                     &jppf::FusionConfig::confidence_threshold)
      .def_readwrite("overlap_threshold", &jppf::FusionConfig::overlap_threshold)
      .def_readwrite("min_stuff", &jppf::FusionConfig::min_stuff)
      .def_readwrite("normalize_heads", &jppf::FusionConfig::normalize_heads);

  m.def("default_min_stuff", &jppf::default_min_stuff, py::arg("height"),
        py::arg("width"));

  py::class_<jppf::Detection>(m, "Detection")
      .def(py::init(&make_detection), py::arg("class_id"), py::arg("score"),
           py::arg("box"), py::arg("mask_logits"))
      .def_readonly("class_id", &jppf::Detection::class_id)
      .def_readonly("score", &jppf::Detection::score)
      .def_readonly("instance_id", &jppf::Detection::instance_id)
      .def_property_readonly(
          "box",
          [](const jppf::Detection& d) {
            return py::make_tuple(d.box.x0, d.box.y0, d.box.x1, d.box.y1);
          })
      .def_property_readonly("mask_logits", [](const jppf::Detection& d) {
        py::array_t<float> out({static_cast<int>(d.mask_logits.height()),
                                static_cast<int>(d.mask_logits.width())});
        std::copy(d.mask_logits.data().begin(), d.mask_logits.data().end(),
                  out.mutable_data());
        return out;
      });

  py::class_<jppf::LabelMap>(m, "LabelMap")
      .def(py::init(&label_map_from_arrays), py::arg("semantic"),
           py::arg("part"), py::arg("instance"))
      .def_readonly("width", &jppf::LabelMap::width)
      .def_readonly("height", &jppf::LabelMap::height)
      .def_property_readonly("semantic",
                             [](const jppf::LabelMap& m_) {
                               return plane_to_array(m_.semantic, m_.height,
                                                     m_.width);
                             })
      .def_property_readonly("part",
                             [](const jppf::LabelMap& m_) {
                               return plane_to_array(m_.part, m_.height,
                                                     m_.width);
                             })
      .def_property_readonly("instance",
                             [](const jppf::LabelMap& m_) {
                               return plane_to_array(m_.instance, m_.height,
                                                     m_.width);
                             })
      .def("__eq__", [](const jppf::LabelMap& a,
                        const jppf::LabelMap& b) { return a == b; });

  m.def("save_label_map", &jppf::save_label_map, py::arg("path"),
        py::arg("label_map"));
  m.def("load_label_map", &jppf::load_label_map, py::arg("path"));
  m.def(
      "save_tensor",
      [](const std::string& path, const FloatArray& arr) {
        jppf::save_tensor(path, tensor_from_array(arr));
      },
      py::arg("path"), py::arg("tensor"));
  m.def(
      "load_tensor",
      [](const std::string& path) {
        return array_from_tensor(jppf::load_tensor(path));
      },
      py::arg("path"));
  m.def("save_detections", &jppf::save_detections, py::arg("path"),
        py::arg("detections"));
  m.def("load_detections", &jppf::load_detections, py::arg("path"));

  m.def(
      "softmax_channels",
      [](const FloatArray& t) {
        return array_from_tensor(jppf::softmax_channels(tensor_from_array(t)));
      },
      py::arg("tensor"));
  m.def(
      "fuse_masked_logits",
      [](const std::vector<FloatArray>& sets) {
        std::vector<jppf::Tensor> tensors;
        tensors.reserve(sets.size());
        for (const auto& s : sets) {
          tensors.push_back(tensor_from_array(s));
        }
        return array_from_tensor(jppf::fuse_masked_logits(tensors));
      },
      py::arg("logit_sets"));
  m.def("filter_detections", &jppf::filter_detections, py::arg("detections"),
        py::arg("config"));

  m.def(
      "jppf",
      [](const FloatArray& sem, const FloatArray& parts,
         const jppf::DetectionSet& dets, const jppf::ClassCatalog& catalog,
         const jppf::FusionConfig& config, int threads) {
        return jppf::jppf(tensor_from_array(sem), tensor_from_array(parts),
                          dets, catalog, config, threads);
      },
      py::arg("sem_logits"), py::arg("part_logits"), py::arg("detections"),
      py::arg("catalog"), py::arg("config") = jppf::FusionConfig{},
      py::arg("threads") = 1);
  m.def(
      "panoptic_fuse_two",
      [](const FloatArray& sem, const jppf::DetectionSet& dets,
         const jppf::ClassCatalog& catalog, const jppf::FusionConfig& config,
         int threads) {
        return jppf::panoptic_fuse_two(tensor_from_array(sem), dets, catalog,
                                       config, threads);
      },
      py::arg("sem_logits"), py::arg("detections"), py::arg("catalog"),
      py::arg("config") = jppf::FusionConfig{}, py::arg("threads") = 1);
  m.def(
      "naive_fusion_oracle",
      [](const FloatArray& sem, const FloatArray& parts,
         const jppf::DetectionSet& dets, const jppf::ClassCatalog& catalog,
         const jppf::FusionConfig& config) {
        return jppf::naive_fusion_oracle(tensor_from_array(sem),
                                         tensor_from_array(parts), dets,
                                         catalog, config);
      },
      py::arg("sem_logits"), py::arg("part_logits"), py::arg("detections"),
      py::arg("catalog"), py::arg("config") = jppf::FusionConfig{});
  m.def(
      "top_down_merge",
      [](const jppf::LabelMap& panoptic, const U16Array& part_map,
         const jppf::ClassCatalog& catalog, int threads) {
        if (part_map.ndim() != 2) {
          throw jppf::ShapeError("part map must be a 2-d array");
        }
        jppf::PartSegMap parts(static_cast<int>(part_map.shape(1)),
                               static_cast<int>(part_map.shape(0)));
        std::copy(part_map.data(), part_map.data() + part_map.size(),
                  parts.ids.begin());
        return jppf::top_down_merge(panoptic, parts, catalog, threads);
      },
      py::arg("panoptic"), py::arg("part_map"), py::arg("catalog"),
      py::arg("threads") = 1);
  m.def(
      "part_map_from_logits",
      [](const FloatArray& parts) {
        const jppf::PartSegMap map =
            jppf::part_map_from_logits(tensor_from_array(parts));
        return plane_to_array(map.ids, map.height, map.width);
      },
      py::arg("part_logits"));

  py::class_<jppf::ClassPq>(m, "ClassPq")
      .def_readonly("class_id", &jppf::ClassPq::class_id)
      .def_readonly("partitionable", &jppf::ClassPq::partitionable)
      .def_readonly("tp", &jppf::ClassPq::tp)
      .def_readonly("fp", &jppf::ClassPq::fp)
      .def_readonly("fn", &jppf::ClassPq::fn)
      .def_readonly("pq", &jppf::ClassPq::pq)
      .def_readonly("sq", &jppf::ClassPq::sq)
      .def_readonly("rq", &jppf::ClassPq::rq)
      .def_readonly("part_pq", &jppf::ClassPq::part_pq)
      .def_readonly("included", &jppf::ClassPq::included);

  py::class_<jppf::PqResult>(m, "PqResult")
      .def_readonly("pq", &jppf::PqResult::pq)
      .def_readonly("sq", &jppf::PqResult::sq)
      .def_readonly("rq", &jppf::PqResult::rq)
      .def_readonly("part_pq_all", &jppf::PqResult::part_pq_all)
      .def_readonly("part_pq_p", &jppf::PqResult::part_pq_p)
      .def_readonly("part_pq_np", &jppf::PqResult::part_pq_np)
      .def_readonly("per_class", &jppf::PqResult::per_class);

  m.def("pq_metrics", &jppf::pq_metrics, py::arg("pred"), py::arg("gt"),
        py::arg("catalog"));
  m.def(
      "pq",
      [](const jppf::LabelMap& pred, const jppf::LabelMap& gt,
         const jppf::ClassCatalog& catalog) {
        const jppf::PqSummary s = jppf::pq(pred, gt, catalog);
        return py::make_tuple(s.pq, s.sq, s.rq);
      },
      py::arg("pred"), py::arg("gt"), py::arg("catalog"));
  m.def(
      "part_pq",
      [](const jppf::LabelMap& pred, const jppf::LabelMap& gt,
         const jppf::ClassCatalog& catalog) {
        const jppf::PartPqSummary s = jppf::part_pq(pred, gt, catalog);
        return py::make_tuple(s.all, s.partitionable, s.non_partitionable);
      },
      py::arg("pred"), py::arg("gt"), py::arg("catalog"));
  m.def("density", &jppf::density, py::arg("pred"));
  m.def(
      "miou",
      [](const U16Array& pred, const U16Array& gt, int num_classes) {
        std::vector<std::uint16_t> p(pred.data(), pred.data() + pred.size());
        std::vector<std::uint16_t> g(gt.data(), gt.data() + gt.size());
        const jppf::MiouResult r = jppf::miou(p, g, num_classes);
        return py::make_tuple(r.mean, r.per_class);
      },
      py::arg("pred"), py::arg("gt"), py::arg("num_classes"));

  py::class_<jppf::EvalReport>(m, "EvalReport")
      .def_readonly("sem_miou", &jppf::EvalReport::sem_miou)
      .def_readonly("part_miou", &jppf::EvalReport::part_miou)
      .def_property_readonly(
          "inst_ap",
          [](const jppf::EvalReport& r) -> py::object {
            return r.inst_ap ? py::cast(*r.inst_ap) : py::none();
          })
      .def_readonly("pq", &jppf::EvalReport::pq)
      .def_readonly("sq", &jppf::EvalReport::sq)
      .def_readonly("rq", &jppf::EvalReport::rq)
      .def_readonly("part_pq_all", &jppf::EvalReport::part_pq_all)
      .def_readonly("part_pq_p", &jppf::EvalReport::part_pq_p)
      .def_readonly("part_pq_np", &jppf::EvalReport::part_pq_np)
      .def_readonly("density", &jppf::EvalReport::density_value)
      .def_readonly("per_class", &jppf::EvalReport::per_class)
      .def("__repr__", [](const jppf::EvalReport& r) {
        std::ostringstream s;
        s << "EvalReport(part_pq_all=" << r.part_pq_all
          << ", pq=" << r.pq << ", density=" << r.density_value << ")";
        return s.str();
      });

  m.def(
      "evaluate",
      [](const jppf::LabelMap& pred, const jppf::LabelMap& gt,
         const jppf::ClassCatalog& catalog,
         const std::optional<jppf::DetectionSet>& dets) {
        return jppf::evaluate(pred, gt, catalog, dets ? &*dets : nullptr);
      },
      py::arg("pred"), py::arg("gt"), py::arg("catalog"),
      py::arg("detections") = std::nullopt);

  py::class_<jppf::SceneConfig>(m, "SceneConfig")
      .def(py::init<>())
      .def_readwrite("width", &jppf::SceneConfig::width)
      .def_readwrite("height", &jppf::SceneConfig::height)
      .def_readwrite("min_instances", &jppf::SceneConfig::min_instances)
      .def_readwrite("max_instances", &jppf::SceneConfig::max_instances)
      .def_readwrite("catalog", &jppf::SceneConfig::catalog)
      .def_readwrite("logit_noise_sigma", &jppf::SceneConfig::logit_noise_sigma)
      .def_readwrite("score_min", &jppf::SceneConfig::score_min)
      .def_readwrite("score_max", &jppf::SceneConfig::score_max)
      .def_readwrite("bbox_jitter", &jppf::SceneConfig::bbox_jitter)
      .def_readwrite("seed", &jppf::SceneConfig::seed);

  py::class_<jppf::Scene>(m, "Scene")
      .def_readonly("gt", &jppf::Scene::gt)
      .def_property_readonly("sem_logits",
                             [](const jppf::Scene& s) {
                               return array_from_tensor(s.sem_logits);
                             })
      .def_property_readonly("part_logits",
                             [](const jppf::Scene& s) {
                               return array_from_tensor(s.part_logits);
                             })
      .def_readonly("dets", &jppf::Scene::dets);

  m.def("generate_scene", &jppf::generate_scene, py::arg("config"));

  m.def(
      "render_label_map",
      [](const jppf::LabelMap& map) {
        const auto pixels = jppf::render_label_map(map);
        py::array_t<std::uint8_t> out({map.height, map.width, 3});
        auto* data = out.mutable_data();
        for (std::size_t i = 0; i < pixels.size(); ++i) {
          data[3 * i] = pixels[i].r;
          data[3 * i + 1] = pixels[i].g;
          data[3 * i + 2] = pixels[i].b;
        }
        return out;
      },
      py::arg("label_map"));
  m.def(
      "write_png",
      [](const std::string& path, const jppf::LabelMap& map) {
        jppf::write_png(path, jppf::render_label_map(map), map.width,
                        map.height);
      },
      py::arg("path"), py::arg("label_map"));

  m.def(
      "run_bench",
      [](const jppf::Scene& scene, const jppf::ClassCatalog& catalog,
         const jppf::FusionConfig& config, int repetitions, int threads) {
        const jppf::BenchReport r =
            jppf::run_bench(scene, catalog, config, repetitions, threads);
        py::dict out;
        out["repetitions"] = r.repetitions;
        out["threads"] = r.threads;
        out["joint_ms_median"] = r.joint_ms_median;
        out["merge_ms_median"] = r.merge_ms_median;
        out["ratio"] = r.ratio;
        return out;
      },
      py::arg("scene"), py::arg("catalog"),
      py::arg("config") = jppf::FusionConfig{}, py::arg("repetitions") = 5,
      py::arg("threads") = 1);
}
