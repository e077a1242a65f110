#include "mars/io/scene_io.hpp"

#include "mars/core/errors.hpp"

#include <fstream>
#include <map>
#include <numbers>

namespace mars {

using nlohmann::json;
using namespace flatland;

namespace {

const json &require(const json &obj, const char *key, const std::string &context) {
    if (!obj.is_object() || !obj.contains(key))
        throw SchemaError(context + ": missing field '" + key + "'");
    return obj.at(key);
}

double number(const json &value, const std::string &context) {
    if (!value.is_number())
        throw SchemaError(context + ": expected a number");
    return value.get<double>();
}

Vec2 point(const json &value, const std::string &context) {
    if (!value.is_array() || value.size() != 2)
        throw SchemaError(context + ": expected [x, y]");
    return {number(value[0], context), number(value[1], context)};
}

double degrees(double d) { return d * std::numbers::pi / 180; }

Material parseMaterial(const json &spec, const std::string &context) {
    const json &type = require(spec, "type", context);
    if (!type.is_string())
        throw SchemaError(context + ".type: expected a string");
    const double albedo = number(require(spec, "albedo", context), context + ".albedo");
    const std::string name = type.get<std::string>();
    if (name == "diffuse")
        return Material::diffuse(albedo);
    if (name == "glossy")
        return Material::glossy(albedo, number(require(spec, "exponent", context), context + ".exponent"));
    throw SchemaError(context + ": unknown material type '" + name + "'");
}

} // namespace

Scene parse_scene(const json &doc, const std::string &fallback_name) {
    if (!doc.is_object())
        throw SchemaError("scene: expected an object");

    std::map<std::string, Material> materials;
    if (doc.contains("materials")) {
        const json &table = doc.at("materials");
        if (!table.is_object())
            throw SchemaError("materials: expected an object");
        for (const auto &[name, spec] : table.items())
            materials.emplace(name, parseMaterial(spec, "materials." + name));
    }

    const json &segs = require(doc, "segments", "scene");
    if (!segs.is_array())
        throw SchemaError("segments: expected an array");
    std::vector<Segment> segments;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string context = "segments[" + std::to_string(i) + "]";
        const json &s = segs[i];
        Segment seg;
        seg.a = point(require(s, "from", context), context + ".from");
        seg.b = point(require(s, "to", context), context + ".to");
        seg.material = Material::black();
        if (s.contains("material")) {
            const json &m = s.at("material");
            if (m.is_string()) {
                auto it = materials.find(m.get<std::string>());
                if (it == materials.end())
                    throw SchemaError(context + ": unknown material '" + m.get<std::string>() + "'");
                seg.material = it->second;
            } else {
                seg.material = parseMaterial(m, context + ".material");
            }
        }
        if (s.contains("radiance"))
            seg.radiance = number(s.at("radiance"), context + ".radiance");
        segments.push_back(seg);
    }

    const json &cam = require(doc, "camera", "scene");
    Camera camera;
    camera.position = point(require(cam, "position", "camera"), "camera.position");
    camera.direction = degrees(number(require(cam, "direction", "camera"), "camera.direction"));
    camera.fov = degrees(number(require(cam, "fov", "camera"), "camera.fov"));
    const json &px = require(cam, "pixels", "camera");
    if (!px.is_number_integer() || px.get<long long>() <= 0)
        throw SchemaError("camera.pixels: expected a positive integer");
    camera.pixels = px.get<std::size_t>();

    std::string name = fallback_name;
    if (doc.contains("name") && doc.at("name").is_string())
        name = doc.at("name").get<std::string>();

    Scene scene(std::move(segments), camera, name);
    scene.validate();
    return scene;
}

Scene load_scene(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open scene file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception &e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return parse_scene(doc, path.stem().string());
}

} // namespace mars
