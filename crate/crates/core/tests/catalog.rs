use spacelab_iqa::catalog::{
    filter, load_catalog, parse_catalog, rank_by, shipped, write_catalog, CatalogError, CmpOp, Constraint, Direction,
    EquipmentKind, FieldValue, RangeRule, Span,
};

fn names(records: &[spacelab_iqa::catalog::EquipmentRecord]) -> Vec<&str> {
    records.iter().map(|r| r.name.as_str()).collect()
}

#[test]
fn shipped_tables_have_the_surveyed_rows() {
    assert_eq!(shipped(EquipmentKind::Background).len(), 8);
    assert_eq!(shipped(EquipmentKind::Camera).len(), 8);
    assert_eq!(shipped(EquipmentKind::Lamp).len(), 6);
}

#[test]
fn spot_checks() {
    let cams = shipped(EquipmentKind::Camera);
    let a7 = cams.iter().find(|r| r.id == "sony-a7riii").unwrap();
    assert_eq!(a7.max_resolution_mpx, Some(42.4));
    assert_eq!(a7.iso_range, Some(Span::range(100.0, 102400.0)));
    assert_eq!(a7.shutter_range_s, Some(Span::range(1.0 / 8000.0, 30.0)));
    let flir = cams.iter().find(|r| r.vendor == "FLIR").unwrap();
    assert_eq!(flir.iso_range, None);
    assert_eq!(flir.value("iso_range"), None);

    let bgs = shipped(EquipmentKind::Background);
    let musou = bgs.iter().find(|r| r.id == "musou-paint").unwrap();
    let cost = musou.cost_eur.as_ref().unwrap();
    assert_eq!(cost.0.len(), 3);
    assert_eq!(cost.cheapest().label.as_deref(), Some("100ml"));
    assert_eq!(musou.value("cost_eur"), Some(FieldValue::Number(Span::point(52.74))));
    assert_eq!(musou.extra.get("material").map(String::as_str), Some("Paint"));

    let lamps = shipped(EquipmentKind::Lamp);
    let godox = lamps.iter().find(|r| r.id == "godox-sl-60").unwrap();
    assert_eq!(godox.color_temp_k, Some(Span::range(5300.0, 5900.0)));
    assert_eq!(godox.power_w, Some(Span::range(60.0, 200.0)));
    let small = lamps.iter().find(|r| r.id == "small-reflectors").unwrap();
    assert_eq!(small.power_w.unwrap().high(), 20.0);
}

#[test]
fn reflectivity_ranking_puts_missing_last() {
    let ranked = rank_by(&shipped(EquipmentKind::Background), "reflectivity_pct", Direction::Asc).unwrap();
    let order: Vec<&str> = ranked.iter().map(|r| r.record.name.as_str()).collect();
    assert_eq!(
        order,
        [
            "Black Velvet",
            "Musou Paint",
            "Fineshut KIWAMY",
            "Flock Sheet",
            "Fineshut SP",
            "Black3.0",
            "Neewer Background",
            "Background Paper"
        ]
    );
    assert!(ranked[6].missing && ranked[7].missing && !ranked[5].missing);

    let desc = rank_by(&shipped(EquipmentKind::Background), "reflectivity_pct", Direction::Desc).unwrap();
    assert_eq!(desc[0].record.name, "Flock Sheet");
    assert!(desc[6].missing);
}

#[test]
fn range_rules_differ_on_straddling_values() {
    let lamps = shipped(EquipmentKind::Lamp);
    let c = [Constraint::parse("power_w<=100").unwrap()];
    let loose = filter(&lamps, &c, RangeRule::Overlaps);
    let strict = filter(&lamps, &c, RangeRule::Within);
    assert!(names(&loose).contains(&"Godox SL-60"));
    assert!(!names(&strict).contains(&"Godox SL-60"));
    assert!(names(&strict).contains(&"Aputure LS 60d"));
    assert!(!names(&loose).contains(&"Sunbrick (sun simulator)"));
}

#[test]
fn cheap_cameras_are_the_raspberry_pis() {
    let cams = shipped(EquipmentKind::Camera);
    let kept = filter(&cams, &[Constraint::new("cost_eur", CmpOp::Le, "60")], RangeRule::Overlaps);
    assert_eq!(names(&kept), ["Raspberry Pi (HQ)", "Raspberry Pi (LQ)"]);
    let none = filter(&cams, &[Constraint::new("cost_eur", CmpOp::Lt, "0")], RangeRule::Overlaps);
    assert!(none.is_empty());
}

#[test]
fn unknown_rank_key_is_an_error() {
    assert!(rank_by(&shipped(EquipmentKind::Camera), "wavelength", Direction::Asc).is_err());
    assert!(Constraint::parse("power_w").is_err());
    assert!(Constraint::parse("<=5").is_err());
}

#[test]
fn shipped_tables_round_trip() {
    for kind in [EquipmentKind::Background, EquipmentKind::Camera, EquipmentKind::Lamp] {
        let records = shipped(kind);
        assert_eq!(parse_catalog(&write_catalog(&records)).unwrap(), records);
    }
}

#[test]
fn malformed_rows_name_the_row() {
    let text = "id,kind,name\na,Camera,A\nb,Toaster,B\n";
    match parse_catalog(text) {
        Err(CatalogError::Field { row, field, .. }) => assert_eq!((row, field.as_str()), (3, "kind")),
        other => panic!("{other:?}"),
    }
    let text = "id,kind,name,power_w\na,Lamp,A,lots\n";
    assert!(matches!(parse_catalog(text), Err(CatalogError::Field { row: 2, .. })));
    assert!(matches!(load_catalog("/nowhere/x.csv"), Err(CatalogError::Io { .. })));
}
