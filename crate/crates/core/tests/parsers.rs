use std::path::{Path, PathBuf};

use proptest::prelude::*;
use surfpoisson::config::RunConfig;
use surfpoisson::mesh::{MeshCsv, ParamMesh};
use surfpoisson::Result;

fn corpus(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let bytes = std::fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    out
}

fn parse_config(data: &[u8]) {
    if let Ok(cfg) = RunConfig::from_slice(data) {
        cfg.build_chart().unwrap();
        cfg.quadrature().unwrap();
    }
}

fn parse_mesh(data: &[u8]) -> Result<ParamMesh> {
    let mut parts = data.splitn(3, |&b| b == 0);
    let csv = MeshCsv {
        vertices: parts.next().unwrap_or_default(),
        triangles: parts.next().unwrap_or_default(),
        boundary: parts.next().unwrap_or_default(),
    };
    let mesh = csv.parse()?;
    assert!(mesh.triangles().iter().flatten().all(|&v| v < mesh.num_vertices()));
    Ok(mesh)
}

fn name(p: &Path) -> &str {
    p.file_name().unwrap().to_str().unwrap()
}

#[test]
fn config_seeds_behave() {
    let seeds = corpus("config_parse");
    assert!(seeds.len() >= 5);
    for (p, bytes) in &seeds {
        let ok = RunConfig::from_slice(bytes).is_ok();
        assert_eq!(ok, name(p) != "truncated", "{}", p.display());
    }
}

#[test]
fn mesh_seeds_behave() {
    for (p, bytes) in corpus("mesh_csv_parse") {
        let result = parse_mesh(&bytes);
        match name(&p) {
            "bad_index" => assert!(result.is_err()),
            "single_triangle" => assert_eq!(result.unwrap().num_triangles(), 1),
            _ => {
                let mesh = result.unwrap();
                assert_eq!(mesh.euler_characteristic(), 1, "{}", p.display());
            }
        }
    }
}

fn mutate(seed: &[u8], edits: &[(usize, u8)], cut: usize) -> Vec<u8> {
    let mut v = seed.to_vec();
    if !v.is_empty() {
        for &(i, b) in edits {
            let k = i % v.len();
            v[k] = b;
        }
        v.truncate(cut % (v.len() + 1));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn config_parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        parse_config(&bytes);
    }

    #[test]
    fn mutated_config_seeds_never_panic(
        which in 0usize..16,
        edits in proptest::collection::vec((any::<usize>(), any::<u8>()), 0..8),
        cut in any::<usize>(),
    ) {
        let seeds = corpus("config_parse");
        let (_, seed) = &seeds[which % seeds.len()];
        parse_config(&mutate(seed, &edits, cut));
    }

    #[test]
    fn mesh_parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        let _ = parse_mesh(&bytes);
    }

    #[test]
    fn mutated_mesh_seeds_never_panic(
        which in 0usize..16,
        edits in proptest::collection::vec((any::<usize>(), prop::sample::select(b"0123456789,.-\n\0e".to_vec())), 0..8),
        cut in any::<usize>(),
    ) {
        let seeds = corpus("mesh_csv_parse");
        let (_, seed) = &seeds[which % seeds.len()];
        let _ = parse_mesh(&mutate(seed, &edits, cut));
    }
}
