#include "riq/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <jpeglib.h>
#include <png.h>

#include "riq/errors.hpp"

namespace riq {

RasterImage RasterImage::constant(int width, int height, double r, double g, double b) {
    RasterImage img;
    img.width = width;
    img.height = height;
    img.data.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] = r;
        img.data[i + 1] = g;
        img.data[i + 2] = b;
    }
    return img;
}

void PreprocessParams::validate() const {
    if (target_size < 16) throw Error("target_size must be >= 16");
    if (gaussian_kernel < 3 || gaussian_kernel % 2 == 0) throw Error("gaussian_kernel must be odd and >= 3");
    if (gaussian_sigma <= 0) throw Error("gaussian_sigma must be > 0");
}

namespace {

RasterImage from_rgb8(const std::vector<std::uint8_t>& bytes, int width, int height) {
    RasterImage img;
    img.width = width;
    img.height = height;
    img.data.resize(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) img.data[i] = bytes[i] / 255.0;
    return img;
}

RasterImage load_png(const std::string& path) {
    png_image pim;
    std::memset(&pim, 0, sizeof pim);
    pim.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&pim, path.c_str()))
        throw CorruptImage(path + ": " + pim.message);
    pim.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> bytes(PNG_IMAGE_SIZE(pim));
    if (!png_image_finish_read(&pim, nullptr, bytes.data(), 0, nullptr)) {
        std::string msg = pim.message;
        png_image_free(&pim);
        throw CorruptImage(path + ": " + msg);
    }
    return from_rgb8(bytes, static_cast<int>(pim.width), static_cast<int>(pim.height));
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

RasterImage load_jpeg(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw FileNotFound(path);

    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        std::fclose(f);
        throw CorruptImage(path + ": jpeg decode failed");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int width = static_cast<int>(cinfo.output_width);
    const int height = static_cast<int>(cinfo.output_height);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = bytes.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    std::fclose(f);
    return from_rgb8(bytes, width, height);
}

// Reads one whitespace/comment-separated token from a PPM header.
std::string ppm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

RasterImage load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path);
    if (ppm_token(in) != "P6") throw UnsupportedFormat(path + ": not a P6 ppm");
    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(ppm_token(in));
        height = std::stoi(ppm_token(in));
        maxval = std::stoi(ppm_token(in));
    } catch (const std::exception&) {
        throw CorruptImage(path + ": bad ppm header");
    }
    if (width <= 0 || height <= 0) throw CorruptImage(path + ": bad ppm dimensions");
    if (maxval != 255) throw UnsupportedFormat(path + ": ppm maxval must be 255");
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height * 3);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw CorruptImage(path + ": truncated ppm payload");
    return from_rgb8(bytes, width, height);
}

}  // namespace

RasterImage load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw FileNotFound(path);
    unsigned char magic[4] = {0, 0, 0, 0};
    probe.read(reinterpret_cast<char*>(magic), 4);
    probe.close();

    if (magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') return load_png(path);
    if (magic[0] == 0xFF && magic[1] == 0xD8) return load_jpeg(path);
    if (magic[0] == 'P' && magic[1] == '6') return load_ppm(path);
    throw UnsupportedFormat(path + ": unrecognized file magic");
}

void save_ppm(const RasterImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> bytes(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        double v = std::clamp(img.data[i], 0.0, 1.0);
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write: " + path);
}

void save_pgm(const std::vector<std::uint8_t>& gray, int width, int height, const std::string& path) {
    if (gray.size() != static_cast<std::size_t>(width) * height)
        throw IncompatibleSize("pgm buffer does not match dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
    if (!out) throw IoError("short write: " + path);
}

HsvImage rgb_to_hsv(const RasterImage& img) {
    HsvImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        const double r = img.data[i], g = img.data[i + 1], b = img.data[i + 2];
        const double maxc = std::max({r, g, b});
        const double minc = std::min({r, g, b});
        const double delta = maxc - minc;
        double h = 0.0;
        if (delta > 0.0) {
            if (maxc == r)
                h = 60.0 * std::fmod((g - b) / delta, 6.0);
            else if (maxc == g)
                h = 60.0 * ((b - r) / delta + 2.0);
            else
                h = 60.0 * ((r - g) / delta + 4.0);
            if (h < 0.0) h += 360.0;
            if (h >= 360.0) h -= 360.0;
        }
        const double s = maxc > 0.0 ? delta / maxc : 0.0;
        out.data[i] = s > 0.0 ? h : 0.0;
        out.data[i + 1] = s;
        out.data[i + 2] = maxc;
    }
    return out;
}

RasterImage hsv_to_rgb(const HsvImage& img) {
    RasterImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        const double h = img.data[i], s = img.data[i + 1], v = img.data[i + 2];
        const double c = v * s;
        const double hp = h / 60.0;
        const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
        double r = 0, g = 0, b = 0;
        if (hp < 1)      { r = c; g = x; }
        else if (hp < 2) { r = x; g = c; }
        else if (hp < 3) { g = c; b = x; }
        else if (hp < 4) { g = x; b = c; }
        else if (hp < 5) { r = x; b = c; }
        else             { r = c; b = x; }
        const double m = v - c;
        out.data[i] = r + m;
        out.data[i + 1] = g + m;
        out.data[i + 2] = b + m;
    }
    return out;
}

RasterImage resize_bilinear(const RasterImage& img, int out_width, int out_height) {
    if (out_width == img.width && out_height == img.height) return img;
    RasterImage out;
    out.width = out_width;
    out.height = out_height;
    out.data.resize(static_cast<std::size_t>(out_width) * out_height * 3);
    const double sx = static_cast<double>(img.width) / out_width;
    const double sy = static_cast<double>(img.height) / out_height;
    for (int r = 0; r < out_height; ++r) {
        // pixel-center mapping
        double fy = (r + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int c = 0; c < out_width; ++c) {
            double fx = (c + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int ch = 0; ch < 3; ++ch) {
                const double top = img.at(y0, x0, ch) * (1 - wx) + img.at(y0, x1, ch) * wx;
                const double bot = img.at(y1, x0, ch) * (1 - wx) + img.at(y1, x1, ch) * wx;
                out.at(r, c, ch) = top * (1 - wy) + bot * wy;
            }
        }
    }
    return out;
}

RasterImage gaussian_blur(const RasterImage& img, int kernel_side, double sigma) {
    const int half = kernel_side / 2;
    std::vector<double> kernel(kernel_side);
    double sum = 0.0;
    for (int i = 0; i < kernel_side; ++i) {
        const double d = i - half;
        kernel[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += kernel[i];
    }
    for (double& k : kernel) k /= sum;

    const auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };

    // separable pass: rows then columns, replicated borders
    RasterImage tmp = img;
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                double acc = 0.0;
                for (int k = 0; k < kernel_side; ++k)
                    acc += kernel[k] * img.at(r, clampi(c + k - half, img.width - 1), ch);
                tmp.at(r, c, ch) = acc;
            }
    RasterImage out = tmp;
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                double acc = 0.0;
                for (int k = 0; k < kernel_side; ++k)
                    acc += kernel[k] * tmp.at(clampi(r + k - half, img.height - 1), c, ch);
                out.at(r, c, ch) = acc;
            }
    return out;
}

namespace {

// 256-bin CDF equalization of the V channel; v' = cdf(v).
void equalize_v(HsvImage& hsv) {
    const std::size_t n = hsv.data.size() / 3;
    std::vector<std::size_t> hist(256, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int bin = static_cast<int>(hsv.data[i * 3 + 2] * 255.0 + 0.5);
        hist[std::clamp(bin, 0, 255)]++;
    }
    std::vector<double> cdf(256, 0.0);
    std::size_t running = 0;
    for (int b = 0; b < 256; ++b) {
        running += hist[b];
        cdf[b] = static_cast<double>(running) / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        int bin = static_cast<int>(hsv.data[i * 3 + 2] * 255.0 + 0.5);
        hsv.data[i * 3 + 2] = cdf[std::clamp(bin, 0, 255)];
    }
}

}  // namespace

RasterImage preprocess(const RasterImage& img, const PreprocessParams& p) {
    p.validate();
    RasterImage out = resize_bilinear(img, p.target_size, p.target_size);
    if (p.equalize) {
        HsvImage hsv = rgb_to_hsv(out);
        equalize_v(hsv);
        out = hsv_to_rgb(hsv);
    }
    out = gaussian_blur(out, p.gaussian_kernel, p.gaussian_sigma);
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    return out;
}

}  // namespace riq
