#![no_main]

use cartdiff::expr::parse_poly_map;
use cartdiff::poly::PolyModel;
use cartdiff::smooth::{parse_smooth_map, SmoothModel};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok((f, layout)) = parse_poly_map(src, &[]) {
        let header = format!("ctx({}) args({})", layout.ctx.join(", "), layout.args.join(", "));
        let printed = format!("{header} {}", f.display_with(&layout.names()));
        let (g, _) = parse_poly_map(&printed, &[]).unwrap();
        assert_eq!(f.comps(), g.comps());
        let m = PolyModel::new();
        let _ = m.differential(&f);
        let _ = m.linearize(&f);
    }
    if let Ok((f, _)) = parse_smooth_map(src, &[]) {
        let _ = SmoothModel::default().differential(&f);
    }
});
