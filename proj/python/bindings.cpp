#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ringbot/errors.hpp"
#include "ringbot/geometry.hpp"
#include "ringbot/link.hpp"
#include "ringbot/policy.hpp"
#include "ringbot/vision.hpp"

namespace py = pybind11;
using namespace ringbot;

namespace {

geometry::Alliance alliance_of(const std::string& s) {
  if (s == "red") {
    return geometry::Alliance::Red;
  }
  if (s == "blue") {
    return geometry::Alliance::Blue;
  }
  throw py::value_error("alliance must be 'red' or 'blue'");
}

vision::ColorImage to_color(py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 3 || a.shape(2) != 3) {
    throw py::value_error("expected an HxWx3 uint8 array");
  }
  vision::ColorImage img;
  img.height = static_cast<int>(a.shape(0));
  img.width = static_cast<int>(a.shape(1));
  img.data.assign(a.data(), a.data() + a.size());
  return img;
}

vision::DepthMap to_depth(py::array_t<float, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) {
    throw py::value_error("expected an HxW depth array");
  }
  vision::DepthMap d;
  d.height = static_cast<int>(a.shape(0));
  d.width = static_cast<int>(a.shape(1));
  d.data.assign(a.data(), a.data() + a.size());
  return d;
}

py::dict summary_dict(const sim::EpisodeSummary& s) {
  auto side = [](const sim::RewardDelta& r, int rings) {
    py::dict d;
    d["ring"] = r.ring;
    d["pin"] = r.pin;
    d["goal"] = r.goal;
    d["position"] = r.position;
    d["total"] = r.total();
    d["rings_collected"] = rings;
    return d;
  };
  py::dict d;
  d["steps"] = s.steps;
  d["clock"] = s.clock;
  d["ended_by"] = s.ended_by;
  d["red"] = side(s.totals[0], s.rings_collected[0]);
  d["blue"] = side(s.totals[1], s.rings_collected[1]);
  if (s.aborted) {
    d["diagnostic"] = s.diagnostic;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ringbot core bindings";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<MalformedPacket>(m, "MalformedPacket", PyExc_ValueError);
  py::register_exception<NoPathError>(m, "NoPathError", PyExc_RuntimeError);

  // geometry
  py::class_<geometry::CameraIntrinsics>(m, "CameraIntrinsics")
      .def(py::init<double, double, double, double>(), py::arg("fx"), py::arg("fy"), py::arg("cx"),
           py::arg("cy"))
      .def_readwrite("fx", &geometry::CameraIntrinsics::fx)
      .def_readwrite("fy", &geometry::CameraIntrinsics::fy)
      .def_readwrite("cx", &geometry::CameraIntrinsics::cx)
      .def_readwrite("cy", &geometry::CameraIntrinsics::cy);
  py::class_<geometry::CameraMount>(m, "CameraMount")
      .def(py::init<double, double, double>(), py::arg("tilt"), py::arg("height"),
           py::arg("forward_offset") = 0.0)
      .def_readwrite("tilt", &geometry::CameraMount::tilt)
      .def_readwrite("height", &geometry::CameraMount::height)
      .def_readwrite("forward_offset", &geometry::CameraMount::forward_offset);

  m.def(
      "pixel_to_camera",
      [](double u, double v, double depth, const geometry::CameraIntrinsics& k) {
        const auto p = geometry::pixel_to_camera({u, v, depth}, geometry::invert_intrinsics(k));
        return py::make_tuple(p.x, p.y, p.z);
      },
      py::arg("u"), py::arg("v"), py::arg("depth"), py::arg("intrinsics"));
  m.def(
      "camera_to_robot",
      [](std::array<double, 3> r, const geometry::CameraMount& mount) {
        const auto p = geometry::camera_to_robot({r[0], r[1], r[2]}, mount);
        return py::make_tuple(p.x, p.y, p.z);
      },
      py::arg("point"), py::arg("mount"));
  m.def(
      "localize",
      [](double u, double v, double depth, const geometry::CameraIntrinsics& k,
         const geometry::CameraMount& mount) {
        const auto r = geometry::camera_to_robot(
            geometry::pixel_to_camera({u, v, depth}, geometry::invert_intrinsics(k)), mount);
        const auto f = geometry::drop_up_axis(r);
        return py::make_tuple(f.x, f.z);
      },
      py::arg("u"), py::arg("v"), py::arg("depth"), py::arg("intrinsics"), py::arg("mount"),
      "Pixel plus depth to the robot-frame floor position (x right, z forward).");

  // vision
  m.def(
      "rgb_to_hsv",
      [](int r, int g, int b) {
        const auto h = vision::rgb_to_hsv({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                           static_cast<std::uint8_t>(b)});
        return py::make_tuple(h.h, h.s, h.v);
      },
      py::arg("r"), py::arg("g"), py::arg("b"));
  m.def(
      "detect_rings",
      [](py::array_t<std::uint8_t> rgb, std::optional<py::array_t<float>> depth,
         const std::string& config_json) {
        const auto cfg = config_json.empty() ? vision::PipelineConfig{}
                                             : vision::parse_pipeline_config(config_json);
        const auto img = to_color(rgb);
        std::optional<vision::DepthMap> dm;
        if (depth) {
          dm = to_depth(*depth);
        }
        const auto res = vision::process_image(img, dm ? &*dm : nullptr, cfg,
                                               vision::HeuristicDetector(cfg.detector));
        py::dict out;
        py::list cands;
        for (const auto& c : res.candidates) {
          cands.append(py::make_tuple(c.u, c.v, c.pixel_count));
        }
        py::list dets;
        for (const auto& d : res.detections) {
          dets.append(py::make_tuple(d.u, d.v, d.depth));
        }
        out["candidates"] = cands;
        out["accepted"] = res.accepted.size();
        out["detections"] = dets;
        return out;
      },
      py::arg("rgb"), py::arg("depth") = py::none(), py::arg("config_json") = "");

  // sim + policy
  py::class_<sim::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("field_width", &sim::SimConfig::field_width)
      .def_readwrite("dt", &sim::SimConfig::dt)
      .def_readwrite("episode_steps", &sim::SimConfig::episode_steps)
      .def_readwrite("ring_count", &sim::SimConfig::ring_count)
      .def_readwrite("ring_capacity", &sim::SimConfig::ring_capacity)
      .def_readwrite("noise_fraction", &sim::SimConfig::noise_fraction)
      .def_readwrite("stack_depth", &sim::SimConfig::stack_depth)
      .def_readwrite("seed", &sim::SimConfig::seed)
      .def_property_readonly("game_length", &sim::SimConfig::game_length)
      .def_static("from_json", &sim::parse_sim_config)
      .def("to_json", &sim::sim_config_to_json);

  m.def(
      "run_episode",
      [](const sim::SimConfig& cfg, const std::string& red, const std::string& blue) {
        policy::PolicySpec rs;
        rs.kind = red;
        policy::PolicySpec bs;
        bs.kind = blue;
        auto r = policy::make_policy(rs, cfg.seed * 2);
        auto b = policy::make_policy(bs, cfg.seed * 2 + 1);
        sim::EpisodeLog log;
        {
          py::gil_scoped_release nogil;
          log = sim::run_episode(cfg, *r, *b, {false});
        }
        return summary_dict(log.summary);
      },
      py::arg("config"), py::arg("red") = "greedy", py::arg("blue") = "zero");
  m.def(
      "initial_observation",
      [](const sim::SimConfig& cfg, const std::string& who) {
        const auto s = sim::init_field(cfg);
        const auto obs = sim::build_observation(s, alliance_of(who), cfg, nullptr);
        return std::vector<double>(obs.begin(), obs.end());
      },
      py::arg("config"), py::arg("alliance") = "red", "Noise-free observation of the initial field.");
  m.def(
      "greedy_policy",
      [](const std::vector<double>& obs) {
        if (obs.size() != sim::kObservationSize) {
          throw py::value_error("observation must have 27 values");
        }
        sim::ObservationVector v{};
        std::copy(obs.begin(), obs.end(), v.begin());
        const auto a = policy::greedy_policy(v);
        return py::make_tuple(a.forward, a.turn);
      },
      py::arg("observation"));
  m.def(
      "astar",
      [](py::array_t<bool, py::array::c_style | py::array::forcecast> occupied,
         std::pair<int, int> start, std::pair<int, int> goal, double resolution) {
        if (occupied.ndim() != 2) {
          throw py::value_error("occupancy must be a 2-D array indexed [row, col]");
        }
        policy::GridMap g(static_cast<int>(occupied.shape(1)), static_cast<int>(occupied.shape(0)),
                          resolution);
        auto o = occupied.unchecked<2>();
        for (int r = 0; r < g.rows; ++r) {
          for (int c = 0; c < g.cols; ++c) {
            g.set({c, r}, o(r, c));
          }
        }
        const auto path =
            policy::astar_plan(g, policy::Cell{start.second, start.first}, policy::Cell{goal.second, goal.first});
        py::list cells;
        for (const auto& c : path.cells) {
          cells.append(py::make_tuple(c.row, c.col));
        }
        return py::make_tuple(cells, path.cost);
      },
      py::arg("occupied"), py::arg("start"), py::arg("goal"), py::arg("resolution") = 0.1,
      "Cells are (row, col). Returns (cells, cost).");

  // link
  m.def(
      "encode_brain",
      [](double x, double z, double heading, double game_time, std::uint64_t iter) {
        return link::encode_brain({x, z, heading, game_time, iter});
      },
      py::arg("x"), py::arg("z"), py::arg("heading"), py::arg("game_time"), py::arg("iter"));
  m.def("decode_brain", [](const std::string& line) {
    const auto p = link::decode_brain(line);
    return py::make_tuple(p.x, p.z, p.heading, p.game_time, p.iter);
  });
  m.def(
      "encode_jetson",
      [](double velocity, double rotation, std::uint64_t iter) {
        return link::encode_jetson({velocity, rotation, iter});
      },
      py::arg("velocity"), py::arg("rotation"), py::arg("iter"));
  m.def("decode_jetson", [](const std::string& line) {
    const auto p = link::decode_jetson(line);
    return py::make_tuple(p.velocity, p.rotation, p.iter);
  });
}
