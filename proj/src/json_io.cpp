#include "minent/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace minent::io {

using json = nlohmann::ordered_json;

namespace {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path.string());
    out << text;
}

void expect_format(const json& j, const std::string& tag, const std::string& what) {
    if (!j.contains("format") || j.at("format") != tag) {
        throw std::invalid_argument(what + ": expected format \"" + tag + "\"");
    }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const std::string& what) {
    if (!rows.is_array() || rows.empty()) {
        throw std::invalid_argument(what + " must be a non-empty array of rows");
    }
    const std::size_t cols = rows.at(0).size();
    Eigen::MatrixXd m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows.at(i).size() != cols) {
            throw std::invalid_argument(what + " row " + std::to_string(i) +
                                        " has inconsistent length");
        }
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows.at(i).at(j).get<double>();
    }
    return m;
}

json cell_to_json(Cell c) { return json::array({c.x, c.y}); }

Cell cell_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument(what + " must be an [x, y] pair");
    }
    return Cell{j.at(0).get<int>(), j.at(1).get<int>()};
}

}  // namespace

std::string hmm_to_json(const Hmm& hmm) {
    json j;
    j["format"] = "cehmm-v1";
    j["num_states"] = hmm.num_states();
    j["observations"] = hmm.observations();
    j["actions"] = hmm.actions();
    j["transition"] = matrix_to_json(hmm.transition());
    json emissions = json::object();
    for (int a = 0; a < hmm.num_actions(); ++a) {
        emissions[hmm.actions()[a]] = matrix_to_json(hmm.emissions(a));
    }
    j["emissions"] = std::move(emissions);
    json mu0 = json::array();
    for (int i = 0; i < hmm.num_states(); ++i) mu0.push_back(hmm.mu0()(i));
    j["mu0"] = std::move(mu0);
    return j.dump(2) + "\n";
}

Hmm hmm_from_json(const std::string& text) {
    json j = json::parse(text);
    expect_format(j, "cehmm-v1", "HMM file");
    auto observations = j.at("observations").get<std::vector<std::string>>();
    auto actions = j.at("actions").get<std::vector<std::string>>();
    Eigen::MatrixXd transition = matrix_from_json(j.at("transition"), "transition");
    const int n = j.at("num_states").get<int>();
    if (transition.rows() != n || transition.cols() != n) {
        throw std::invalid_argument("transition shape disagrees with num_states");
    }
    std::vector<Eigen::MatrixXd> emissions;
    for (const std::string& a : actions) {
        emissions.push_back(
            matrix_from_json(j.at("emissions").at(a), "emissions[" + a + "]"));
    }
    auto mu0_values = j.at("mu0").get<std::vector<double>>();
    Eigen::VectorXd mu0 =
        Eigen::Map<const Eigen::VectorXd>(mu0_values.data(), mu0_values.size());
    return Hmm(std::move(observations), std::move(actions), std::move(transition),
               std::move(emissions), std::move(mu0));
}

void save_hmm(const Hmm& hmm, const std::filesystem::path& path) {
    write_file(path, hmm_to_json(hmm));
}

Hmm load_hmm(const std::filesystem::path& path) {
    try {
        return hmm_from_json(read_text(path));
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(path.string() + ": " + err.what());
    }
}

std::string policy_to_json(const FiniteStatePolicy& policy) {
    json j;
    j["format"] = "fsp-v1";
    j["memory_length"] = policy.memory_length();
    j["observations"] = policy.observations();
    j["actions"] = policy.actions();
    json theta = json::object();
    for (int q = 0; q < policy.num_memory_states(); ++q) {
        json row = json::object();
        for (int a = 0; a < policy.num_actions(); ++a) {
            row[policy.actions()[a]] = policy.theta()(q, a);
        }
        theta[policy.memory_label(q)] = std::move(row);
    }
    j["theta"] = std::move(theta);
    return j.dump(2) + "\n";
}

FiniteStatePolicy policy_from_json(const std::string& text) {
    json j = json::parse(text);
    expect_format(j, "fsp-v1", "policy file");
    FiniteStatePolicy policy(j.at("memory_length").get<int>(),
                             j.at("observations").get<std::vector<std::string>>(),
                             j.at("actions").get<std::vector<std::string>>());
    Eigen::MatrixXd theta =
        Eigen::MatrixXd::Zero(policy.num_memory_states(), policy.num_actions());
    const json& rows = j.at("theta");
    for (const auto& [label, row] : rows.items()) {
        int q = policy.memory_state_by_label(label);
        for (int a = 0; a < policy.num_actions(); ++a) {
            theta(q, a) = row.at(policy.actions()[a]).get<double>();
        }
    }
    policy.set_theta(theta);
    return policy;
}

void save_policy(const FiniteStatePolicy& policy, const std::filesystem::path& path) {
    write_file(path, policy_to_json(policy));
}

FiniteStatePolicy load_policy(const std::filesystem::path& path) {
    try {
        return policy_from_json(read_text(path));
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(path.string() + ": " + err.what());
    }
}

std::string gridworld_to_json(const GridWorldSpec& spec) {
    json j;
    j["format"] = "gridworld-v1";
    j["width"] = spec.width;
    j["height"] = spec.height;
    json walls = json::array();
    for (Cell w : spec.walls) walls.push_back(cell_to_json(w));
    j["walls"] = std::move(walls);
    json types = json::array();
    for (const RobotType& rt : spec.robot_types) {
        types.push_back(json{{"start", cell_to_json(rt.start)}, {"goal", cell_to_json(rt.goal)}});
    }
    j["robot_types"] = std::move(types);
    j["slip_prob"] = spec.slip_prob;
    json sensors = json::array();
    for (const Sensor& s : spec.sensors) {
        json cells = json::array();
        for (Cell c : s.cells) cells.push_back(cell_to_json(c));
        sensors.push_back(json{{"id", s.id}, {"cells", std::move(cells)}});
    }
    j["sensors"] = std::move(sensors);
    j["detection_prob"] = spec.detection_prob;
    j["type_prior"] = spec.type_prior;
    return j.dump(2) + "\n";
}

GridWorldSpec gridworld_from_json(const std::string& text) {
    json j = json::parse(text);
    expect_format(j, "gridworld-v1", "grid world file");
    GridWorldSpec spec;
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    for (const json& w : j.value("walls", json::array())) {
        spec.walls.push_back(cell_from_json(w, "wall"));
    }
    for (const json& rt : j.at("robot_types")) {
        spec.robot_types.push_back(RobotType{cell_from_json(rt.at("start"), "start"),
                                             cell_from_json(rt.at("goal"), "goal")});
    }
    spec.slip_prob = j.at("slip_prob").get<double>();
    for (const json& s : j.at("sensors")) {
        Sensor sensor;
        sensor.id = s.at("id").get<std::string>();
        for (const json& c : s.at("cells")) {
            sensor.cells.push_back(cell_from_json(c, "sensor cell"));
        }
        spec.sensors.push_back(std::move(sensor));
    }
    spec.detection_prob = j.at("detection_prob").get<double>();
    spec.type_prior = j.at("type_prior").get<std::vector<double>>();
    return spec;
}

GridWorldSpec load_gridworld(const std::filesystem::path& path) {
    try {
        return gridworld_from_json(read_text(path));
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(path.string() + ": " + err.what());
    }
}

std::string state_index_to_json(const CompiledEnvironment& env) {
    json states = json::array();
    for (std::size_t i = 0; i < env.state_type.size(); ++i) {
        states.push_back(json{{"id", i},
                              {"type", env.state_type[i] + 1},
                              {"cell", cell_to_json(env.state_cell[i])}});
    }
    json j;
    j["format"] = "cehmm-state-index-v1";
    j["states"] = std::move(states);
    return j.dump(2) + "\n";
}

ObservationRecord record_from_json_line(const Hmm& hmm, const std::string& line) {
    json j = json::parse(line);
    ObservationRecord record;
    for (const json& o : j.at("o")) {
        record.observations.push_back(hmm.observation_index(o.get<std::string>()));
    }
    for (const json& a : j.at("a")) {
        record.actions.push_back(hmm.action_index(a.get<std::string>()));
    }
    if (record.observations.size() != record.actions.size() || record.observations.empty()) {
        throw std::invalid_argument("record must hold equal-length, non-empty o and a");
    }
    return record;
}

std::string record_to_json_line(const Hmm& hmm, const ObservationRecord& record) {
    json o = json::array();
    for (int obs : record.observations) o.push_back(hmm.observations()[obs]);
    json a = json::array();
    for (int act : record.actions) a.push_back(hmm.actions()[act]);
    json j;
    j["o"] = std::move(o);
    j["a"] = std::move(a);
    return j.dump();
}

std::string posterior_to_json(const Posterior& posterior) {
    json probs = json::object();
    for (std::size_t i = 0; i < posterior.support.size(); ++i) {
        probs[std::to_string(posterior.support[i])] = posterior.probs(i);
    }
    json j;
    j["posterior"] = std::move(probs);
    j["entropy_bits"] = entropy_given_observation(posterior);
    return j.dump();
}

std::string trajectory_to_json_line(const Hmm& hmm, const Trajectory& trajectory) {
    json j;
    j["states"] = trajectory.states;
    json o = json::array();
    for (int obs : trajectory.record.observations) o.push_back(hmm.observations()[obs]);
    json a = json::array();
    for (int act : trajectory.record.actions) a.push_back(hmm.actions()[act]);
    j["o"] = std::move(o);
    j["a"] = std::move(a);
    j["seed_tag"] = trajectory.seed_tag;
    return j.dump();
}

std::string gradient_to_json(const FiniteStatePolicy& policy, const GradientEstimate& estimate) {
    json grad = json::object();
    for (int q = 0; q < policy.num_memory_states(); ++q) {
        json row = json::object();
        for (int a = 0; a < policy.num_actions(); ++a) {
            row[policy.actions()[a]] = estimate.vector(policy.parameter_index(q, a));
        }
        grad[policy.memory_label(q)] = std::move(row);
    }
    json j;
    j["theta_grad"] = std::move(grad);
    j["entropy_bits"] = estimate.entropy_estimate;
    j["M"] = estimate.sample_count;
    return j.dump(2) + "\n";
}

}  // namespace minent::io
