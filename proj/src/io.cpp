// Copyright 2026 The bellviol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bellviol/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bellviol::io {

using nlohmann::json;

namespace {

json complex_pair(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> parse_pair(const json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ValidationError("expected a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json parse_document(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("malformed document: ") + e.what());
    }
}

int require_int(const json &doc, const char *key) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
        throw ValidationError(std::string("missing integer field '") + key + "'");
    }
    return doc[key].get<int>();
}

json matrix_to_json(const LocalMatrix<double> &m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out.push_back(complex_pair(m(r, c)));
        }
    }
    return out;
}

LocalMatrix<double> matrix_from_json(const json &j, int d) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(d) * d) {
        throw ValidationError("observable must hold d*d [re, im] pairs");
    }
    LocalMatrix<double> m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            m(r, c) = parse_pair(j[static_cast<std::size_t>(r * d + c)]);
        }
    }
    return m;
}

} // namespace

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failure on '" + path.string() + "'");
    }
    return buf.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write failure on '" + path.string() + "'");
    }
}

std::string state_to_text(const PureState<double> &state) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < state.dimension(); ++i) {
        amps.push_back(complex_pair(state.amplitudes()(i)));
    }
    json doc = {{"d", state.d()}, {"n_sites", state.n_sites()}, {"amplitudes", amps}};
    return doc.dump(1) + "\n";
}

PureState<double> state_from_text(const std::string &text) {
    const json doc = parse_document(text);
    const int d = require_int(doc, "d");
    const int n = require_int(doc, "n_sites");
    if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
        throw ValidationError("missing 'amplitudes' list");
    }
    const json &amps = doc["amplitudes"];
    StateVector<double> v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = parse_pair(amps[i]);
    }
    return PureState<double>::from_amplitudes(d, n, std::move(v));
}

void write_state(const std::filesystem::path &path, const PureState<double> &state) {
    write_text_file(path, state_to_text(state));
}

PureState<double> read_state(const std::filesystem::path &path) {
    return state_from_text(read_text_file(path));
}

std::string settings_to_text(const MeasurementSettings<double> &settings) {
    json sites = json::array();
    for (const auto &pair : settings.pairs()) {
        sites.push_back({{"a0", matrix_to_json(pair.a0())}, {"a1", matrix_to_json(pair.a1())}});
    }
    json doc = {{"d", settings.d()}, {"n_sites", settings.n_sites()}, {"sites", sites}};
    return doc.dump(1) + "\n";
}

MeasurementSettings<double> settings_from_text(const std::string &text) {
    const json doc = parse_document(text);
    const int d = require_int(doc, "d");
    const int n = require_int(doc, "n_sites");
    if (d < 2 || n < 1) {
        throw ValidationError("settings need d >= 2 and n_sites >= 1");
    }
    if (!doc.contains("sites") || !doc["sites"].is_array() ||
        doc["sites"].size() != static_cast<std::size_t>(n)) {
        throw ValidationError("'sites' must list one pair per site");
    }
    std::vector<DichotomicPair<double>> pairs;
    for (const json &site : doc["sites"]) {
        if (!site.contains("a0") || !site.contains("a1")) {
            throw ValidationError("each site needs 'a0' and 'a1'");
        }
        pairs.emplace_back(matrix_from_json(site["a0"], d), matrix_from_json(site["a1"], d));
    }
    return MeasurementSettings<double>(std::move(pairs));
}

void write_settings(const std::filesystem::path &path,
                    const MeasurementSettings<double> &settings) {
    write_text_file(path, settings_to_text(settings));
}

MeasurementSettings<double> read_settings(const std::filesystem::path &path) {
    return settings_from_text(read_text_file(path));
}

} // namespace bellviol::io
