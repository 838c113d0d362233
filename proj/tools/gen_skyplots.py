#!/usr/bin/env python3
"""Generate the bundled reference skyplots from nominal Walker constellations.

GPS: 24 satellites, Walker 55:24/6/2, a = 26559.7 km.
Galileo: 30 satellites (24 + 6 spares), Walker 56:30/3/1, a = 29600 km.
Circular orbits, spherical Earth; the site and epoch below are fixed so the
output is reproducible. Rerun only if the reference geometry must change.

The epoch puts G08 (the default faulty satellite) at ~25 deg elevation with a
large along-track influence -- a worst case for slow ramps. The 10 deg mask
stands in for cuttings and trackside obstructions.

    python3 tools/gen_skyplots.py data/
"""
import math
import sys
from pathlib import Path

EARTH_RATE = 7.2921151467e-5  # rad/s
MU = 3.986004418e14  # m^3/s^2
RE = 6378137.0

SITE_LAT = 43.6045  # Toulouse
SITE_LON = 1.4440
EPOCH_S = 64800.0  # seconds since the constellation reference epoch
MASK_DEG = 10.0


def walker(total, planes, phasing, incl_deg, a, raan0_deg=0.0):
    per_plane = total // planes
    sats = []
    for p in range(planes):
        raan = math.radians(raan0_deg + 360.0 * p / planes)
        for s in range(per_plane):
            u0 = math.radians(360.0 * s / per_plane + 360.0 * phasing * p / total)
            sats.append((raan, u0))
    return sats, math.radians(incl_deg), a


def ecef_position(raan, u0, incl, a, t):
    n = math.sqrt(MU / a**3)
    u = u0 + n * t
    x_orb, y_orb = a * math.cos(u), a * math.sin(u)
    # inertial
    x = x_orb * math.cos(raan) - y_orb * math.cos(incl) * math.sin(raan)
    y = x_orb * math.sin(raan) + y_orb * math.cos(incl) * math.cos(raan)
    z = y_orb * math.sin(incl)
    theta = EARTH_RATE * t
    return (x * math.cos(theta) + y * math.sin(theta),
            -x * math.sin(theta) + y * math.cos(theta),
            z)


def az_el(sat, lat_deg, lon_deg):
    lat, lon = math.radians(lat_deg), math.radians(lon_deg)
    site = (RE * math.cos(lat) * math.cos(lon), RE * math.cos(lat) * math.sin(lon), RE * math.sin(lat))
    d = [s - r for s, r in zip(sat, site)]
    e = -math.sin(lon) * d[0] + math.cos(lon) * d[1]
    n = (-math.sin(lat) * math.cos(lon) * d[0] - math.sin(lat) * math.sin(lon) * d[1]
         + math.cos(lat) * d[2])
    u = math.cos(lat) * math.cos(lon) * d[0] + math.cos(lat) * math.sin(lon) * d[1] + math.sin(lat) * d[2]
    az = math.degrees(math.atan2(e, n)) % 360.0
    el = math.degrees(math.atan2(u, math.hypot(e, n)))
    return az, el


def visible(name, spec, t):
    sats, incl, a = spec
    rows = []
    for prn, (raan, u0) in enumerate(sats, start=1):
        az, el = az_el(ecef_position(raan, u0, incl, a, t), SITE_LAT, SITE_LON)
        if el > MASK_DEG:
            rows.append((name, prn, az, el))
    return rows


def write(path, rows, title):
    with open(path, "w") as f:
        f.write(f"# {title}\n")
        f.write(f"# site {SITE_LAT:.4f}N {SITE_LON:.4f}E, epoch +{EPOCH_S:.0f} s, mask {MASK_DEG:.0f} deg\n")
        f.write("# constellation,id,azimuth_deg,elevation_deg\n")
        for name, prn, az, el in rows:
            f.write(f"{name},{prn},{az:.3f},{el:.3f}\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    gps = walker(24, 6, 2, 55.0, 26559.7e3)
    gal = walker(30, 3, 1, 56.0, 29600.0e3, raan0_deg=20.0)
    gps_rows = visible("GPS", gps, EPOCH_S)
    gal_rows = visible("GALILEO", gal, EPOCH_S)
    write(out / "gps24.skyplot", gps_rows, "Nominal GPS 24-slot geometry")
    write(out / "dual54.skyplot", gps_rows + gal_rows, "Nominal GPS 24 + Galileo 30 geometry")
    for r in gps_rows + gal_rows:
        print(*r)


if __name__ == "__main__":
    main()
