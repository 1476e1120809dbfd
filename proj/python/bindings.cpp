// Copyright 2026 The mlidar Authors.
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
#include <string>
#include <vector>

#include "cli.hpp"
#include "mlidar/completion.hpp"
#include "mlidar/error.hpp"
#include "mlidar/foveation.hpp"
#include "mlidar/metrics.hpp"
#include "mlidar/optics.hpp"
#include "mlidar/scan.hpp"
#include "mlidar/synthetic.hpp"

namespace py = pybind11;
using namespace mlidar;

namespace {

using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

DepthMap ToDepth(const DArray& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::kInvalidArgument, "depth must be 2-D");
  DepthMap d(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 1, 0.0);
  std::copy(a.data(), a.data() + a.size(), d.data().begin());
  return d;
}

template <typename T>
py::array_t<T> ToArray(const Image<T>& img) {
  std::vector<py::ssize_t> shape = {img.height(), img.width()};
  if (img.channels() > 1) shape.push_back(img.channels());
  py::array_t<T> out(shape);
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

RgbImage ToRgb(const U8Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) {
    throw Error(ErrorCode::kInvalidArgument, "rgb must be H x W x 3");
  }
  RgbImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 3, 0);
  std::copy(a.data(), a.data() + a.size(), img.data().begin());
  return img;
}

py::dict ReportDict(const metrics::MetricsReport& r) {
  py::dict d;
  d["mre_pct"] = r.mre_pct;
  d["rmse_m"] = r.rmse_m;
  d["log10_err"] = r.log10_err;
  d["delta1_pct"] = r.delta1_pct;
  d["delta2_pct"] = r.delta2_pct;
  d["delta3_pct"] = r.delta3_pct;
  d["n_pixels"] = r.n_pixels;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mlidar, m) {
  m.doc() = "MEMS lidar design and scanning simulator";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::enum_<optics::ReceiverKind>(m, "ReceiverKind")
      .value("RETROREFLECTIVE", optics::ReceiverKind::kRetroreflective)
      .value("RECEIVER_ARRAY", optics::ReceiverKind::kReceiverArray)
      .value("SINGLE_DETECTOR", optics::ReceiverKind::kSingleDetector);

  py::class_<optics::TransmitterSpec>(m, "Transmitter")
      .def(py::init([](double m2, double w0, double lambda, double mirror) {
             return optics::TransmitterSpec{m2, w0, lambda, mirror};
           }),
           py::arg("beam_quality"), py::arg("waist_radius_m"), py::arg("wavelength_m") = 1e-6,
           py::arg("mirror_fov_rad") = 25.0 * 3.14159265358979323846 / 180.0)
      .def_readwrite("beam_quality", &optics::TransmitterSpec::beam_quality_m)
      .def_readwrite("waist_radius_m", &optics::TransmitterSpec::waist_radius_m)
      .def_readwrite("wavelength_m", &optics::TransmitterSpec::wavelength_m)
      .def_readwrite("mirror_fov_rad", &optics::TransmitterSpec::mirror_fov_rad);

  py::class_<optics::ReceiverSpec>(m, "Receiver")
      .def(py::init([](optics::ReceiverKind kind, double a, double u, double f, int n) {
             return optics::ReceiverSpec{kind, n, a, u, f};
           }),
           py::arg("kind"), py::arg("aperture_m"), py::arg("image_distance_m"),
           py::arg("focal_length_m"), py::arg("detector_count") = 1)
      .def_readwrite("kind", &optics::ReceiverSpec::kind)
      .def_readwrite("aperture_m", &optics::ReceiverSpec::aperture_m)
      .def_readwrite("image_distance_m", &optics::ReceiverSpec::image_distance_m)
      .def_readwrite("focal_length_m", &optics::ReceiverSpec::focal_length_m)
      .def_readwrite("detector_count", &optics::ReceiverSpec::detector_count);

  py::class_<optics::DesignCharacterization>(m, "Characterization")
      .def_readonly("fov_rad", &optics::DesignCharacterization::fov_rad)
      .def_readonly("uncapped_fov_rad", &optics::DesignCharacterization::uncapped_fov_rad)
      .def_readonly("received_radiance_per_m",
                    &optics::DesignCharacterization::received_radiance_per_m)
      .def_readonly("volume_m3", &optics::DesignCharacterization::volume_m3)
      .def_readonly("range_m", &optics::DesignCharacterization::range_m)
      .def_property_readonly("flags", [](const optics::DesignCharacterization& c) {
        return optics::FlagString(c.flags);
      });

  m.def("beam_divergence", &optics::BeamDivergence, py::arg("tx"));
  m.def("characterize", &optics::Characterize, py::arg("tx"), py::arg("rx"), py::arg("range_m"));
  m.def("fov_limit_underfocused", &optics::FovLimitUnderfocused, py::arg("rx"));

  m.def(
      "fit_budget",
      [](const std::vector<std::pair<double, double>>& pairs) {
        std::vector<scan::BudgetObservation> obs;
        for (auto [fps, n] : pairs) obs.push_back({fps, n});
        const auto fit = scan::FitBudget(obs);
        return py::make_tuple(fit.sample_rate_hz, fit.frame_overhead_s);
      },
      py::arg("pairs"), "Least-squares (sample_rate_hz, frame_overhead_s) from (fps, samples)");
  m.def(
      "budget",
      [](double fps, double rate, double overhead) {
        scan::MirrorModel model = scan::PrototypeMirror();
        if (rate > 0) {
          model.sample_rate_hz = rate;
          model.frame_overhead_s = overhead;
        }
        return scan::Budget(model, fps);
      },
      py::arg("fps"), py::arg("sample_rate_hz") = 0.0, py::arg("frame_overhead_s") = 0.0);

  m.def(
      "compute_metrics",
      [](const DArray& pred, const DArray& truth) {
        return ReportDict(metrics::Compute(ToDepth(pred), ToDepth(truth)));
      },
      py::arg("pred"), py::arg("truth"));

  m.def(
      "entropy_map",
      [](const U8Array& gray, int window) {
        if (gray.ndim() != 2) throw Error(ErrorCode::kInvalidArgument, "gray must be 2-D");
        GrayImage g(static_cast<int>(gray.shape(1)), static_cast<int>(gray.shape(0)), 1, 0);
        std::copy(gray.data(), gray.data() + gray.size(), g.data().begin());
        return ToArray(foveation::ComputeEntropyMap(g, window).bits);
      },
      py::arg("gray"), py::arg("window") = 9);

  m.def(
      "complete",
      [](const DArray& sparse, const U8Array& rgb, double sigma_spatial, double sigma_color,
         int k) {
        completion::GuidedFillParams p;
        p.sigma_spatial_px = sigma_spatial;
        p.sigma_color = sigma_color;
        p.k_neighbors = k;
        return ToArray(completion::Complete(ToDepth(sparse), ToRgb(rgb), p).depth);
      },
      py::arg("sparse"), py::arg("rgb"), py::arg("sigma_spatial_px") = 12.0,
      py::arg("sigma_color") = 20.0, py::arg("k_neighbors") = 16);

  m.def(
      "fronto_plane",
      [](double z, int width, int height) {
        const auto seq = synthetic::Generate(synthetic::FrontoPlane(z, width, height), 0);
        return py::make_tuple(ToArray(seq.frames[0].rgb), ToArray(seq.frames[0].depth));
      },
      py::arg("z_m"), py::arg("width") = 160, py::arg("height") = 120);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv = {"mlidar"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int code = cli::Run(argv, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one command line; returns (exit_code, stdout, stderr).");
}
