//! Input is `vertices.csv`, `triangles.csv` and `boundary.csv` separated by NUL bytes.

#![no_main]

use libfuzzer_sys::fuzz_target;
use surfpoisson::mesh::MeshCsv;

fuzz_target!(|data: &[u8]| {
    let mut parts = data.splitn(3, |&b| b == 0);
    let vertices = parts.next().unwrap_or_default();
    let triangles = parts.next().unwrap_or_default();
    let boundary = parts.next().unwrap_or_default();
    let csv = MeshCsv {
        vertices,
        triangles,
        boundary,
    };
    if let Ok(mesh) = csv.parse() {
        assert!(mesh.triangles().iter().flatten().all(|&v| v < mesh.num_vertices()));
        let _ = mesh.total_area();
        let _ = mesh.euler_characteristic();
    }
});
