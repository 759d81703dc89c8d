//! Volume-one bodies and their caps.

use rpoly::geometry::{cap_for_volume, cap_volume};
use rpoly::{Body, Point};

fn main() -> rpoly::Result<()> {
    let bodies = [
        ("disk", Body::ball(2)?),
        ("square", Body::cube(2)?),
        ("triangle", Body::simplex(2)?),
        ("ellipse 1:3", Body::ellipsoid(&[1.0, 3.0])?),
        ("ball d=3", Body::ball(3)?),
        ("cube d=3", Body::cube(3)?),
    ];
    let u = |c: &[f64]| Point::new(c).unwrap().normalized().unwrap();
    println!("{:<12} {:>10} {:>12} {:>14}", "body", "volume", "h(u)", "offset(0.01)");
    for (name, body) in &bodies {
        let dir = if body.dim() == 2 { u(&[1.0, 1.0]) } else { u(&[1.0, 1.0, 1.0]) };
        let cap = cap_for_volume(body, &dir, 0.01)?;
        println!(
            "{name:<12} {:>10.6} {:>12.6} {:>14.6}",
            body.volume(),
            body.support(&dir)?,
            cap.offset
        );
    }

    let disk = Body::ball(2)?;
    let r = disk.radius().unwrap();
    let e1 = Point::basis(2, 0);
    println!("\ndisk of radius {r:.6}: cap volume as the offset sweeps the diameter");
    for k in 0..=8 {
        let t = -r + 2.0 * r * k as f64 / 8.0;
        println!("  t = {t:>9.5}  volume = {:.8}", cap_volume(&disk, &e1, t)?);
    }
    Ok(())
}
