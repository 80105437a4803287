use std::io::BufReader;

use num_complex::Complex32;
use proptest::prelude::*;

use groundref::cube_io::{read_cube, write_cube};
use groundref::dsp::Strategy;
use groundref::export::write_height_psd_csv;
use groundref::heightspec::{height_axis, HeightSpectrum};
use groundref::scenario::sor;
use groundref::synth::DataCube;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cube_files_round_trip(chirps in 1usize..4, cycles in 1usize..4, seed in any::<u32>()) {
        let mut cfg = sor();
        cfg.n_ramps_per_cycle = chirps;
        let mut cube = DataCube::zeros(cfg, cycles);
        let (ns, nc, ny) = cube.dims();
        for s in 0..ns {
            for c in 0..nc {
                for y in 0..ny {
                    let k = (s * 31 + c * 7 + y) as u32 ^ seed;
                    cube.set(s, c, y, Complex32::new(k as f32 * 1e-3, -(k as f32).sqrt()));
                }
            }
        }
        let mut bytes = Vec::new();
        write_cube(&mut bytes, &cube).unwrap();
        let back = read_cube(BufReader::new(bytes.as_slice())).unwrap();
        prop_assert_eq!(back.dims(), cube.dims());
        prop_assert_eq!(back.as_slice(), cube.as_slice());

        // Any truncation is detected.
        let cut = bytes.len() - 1 - (seed as usize % 8);
        prop_assert!(read_cube(BufReader::new(&bytes[..cut])).is_err());
    }

    #[test]
    fn psd_csv_reads_back(psd in prop::collection::vec(0.0..1e3f64, 2..200)) {
        prop_assume!(psd.iter().sum::<f64>() > 0.0);
        let spec = HeightSpectrum {
            heights: height_axis(30.0, 1.0, 76.5e9, psd.len()),
            psd: psd.clone(),
            bin_spacing: 30.0,
            sensor_height: 1.0,
            center_frequency: 76.5e9,
            n_points: 100,
            strategy: Some(Strategy::SoR),
        };
        let mut out = Vec::new();
        write_height_psd_csv(&mut out, &spec).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<(f64, f64)> = text
            .lines()
            .skip(2)
            .map(|l| {
                let (h, p) = l.split_once(',').unwrap();
                (h.parse().unwrap(), p.parse().unwrap())
            })
            .collect();
        prop_assert_eq!(rows.len(), psd.len());
        let total: f64 = psd.iter().sum();
        for ((h, p), (eh, ep)) in rows.iter().zip(spec.heights.iter().zip(&psd)) {
            prop_assert_eq!(h, eh);
            prop_assert!((p - ep / total).abs() <= 1e-15);
        }
    }
}
