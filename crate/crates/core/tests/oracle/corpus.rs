// Generated by tests/oracle/quadrature_corpus.py; do not edit by hand.
pub const CORPUS: &[(&[(f64, f64)], f64)] = &[
    (&[(0.5, 40.0), (2.0, 60.0)], -6.759906081144882988325793),
    (&[(1.0, 1.0)], -0.6931471805599453094172321),
    (&[(3.0, 0.5)], -0.1727959539127382413746848),
    (&[(0.25, 7.5), (4.0, 0.3)], -6.007040998389973478045548),
    (&[(0.001, 100.0), (0.002, 400.0)], -742.7014256530654842932849),
    (&[(1e-06, 5000.0), (5e-07, 20000.0)], -131265.4989604535207391198),
    (&[(0.2857142857142857, 2.0), (0.14285714285714285, 0.0)], -2.515678308454754077101356),
    (&[(10.0, 3.0), (0.1, 3.0), (1.0, 3.0)], -5.873678561333376793388407),
    (&[(0.02, 1500.0), (0.01, 250.0)], -261.0452377172579762041115),
    (&[(50.0, 1.0), (0.5, 1.0)], -1.099183554036401804088519),
    (&[(0.001968996437972385, 21.575), (2.11358107390799, 5.0), (0.3199121863835647, 2.0)], -87.74225159415455058840793),
    (&[(0.010845227875485058, 2.0)], -8.387158470422798735435237),
    (&[(0.00042060208812650415, 0.199), (0.0031569901686238286, 40.0)], -123.3132635239215893006356),
    (&[(1.2336889375656879, 13.0), (0.01155883617121561, 5.0)], -17.77027163460099519343371),
    (&[(5.313447974744782, 13.0)], -0.5730541385661089415450994),
    (&[(0.007680373103634479, 600.0), (0.0005693849971692487, 1.0), (1.2332591464952383, 40.0)], -341.1957091199802300683081),
    (&[(0.004415164117503016, 600.0)], -481.8754736301443358871966),
    (&[(0.006407889626762829, 120.0), (0.004526784596231234, 2.0), (0.06653453126404975, 29.864), (0.973145299355277, 8.0)], -188.2291732693431770327093),
    (&[(0.3245870868553169, 1.0), (0.004700803454680137, 5.0), (0.0017442237021950391, 600.0)], -810.0032274703633650706541),
    (&[(0.3084527633698896, 3.0), (3.7924857079345, 8.0), (2.2604339722026103, 8.0), (0.00011203571914239904, 8.0)], -62.43451826771688984723414),
    (&[(0.0002711194014440177, 13.0), (0.005506929709293572, 1.0)], -86.84616658039450250296858),
    (&[(0.002732865617429677, 26.973)], -95.74360982121783850865988),
    (&[(0.0008476284388405193, 1.0), (0.5124930686482473, 1.0), (0.3371505920934361, 13.0), (0.23371497381640974, 40.0)], -17.55324880916535919440525),
    (&[(2.8148498393069548, 20.9), (0.00010311085865654468, 3.0), (0.0012143142731930797, 26.645)], -133.4702657932992926883772),
    (&[(0.005413291538311622, 8.0)], -31.33853694273283409281308),
    (&[(0.12884626397693852, 17.229)], -13.71301316912827364598008),
    (&[(0.0031186294625029924, 21.158), (0.0006490537399075839, 8.0), (2.2181353671915445, 3.0)], -110.0640429396839321731684),
    (&[(0.008234249910970116, 40.0), (0.9212085490824928, 1.0), (0.0017050252076729966, 29.347), (0.8575108039066472, 18.034)], -163.1800362391770235396484),
    (&[(0.0431301329024371, 600.0), (0.00012895785552838467, 21.603)], -195.514003175166404132413),
    (&[(0.015705523486448394, 1.0)], -4.169326282133275474711203),
    (&[(0.0001863642002340134, 8.0), (0.0010193861624533491, 20.928), (0.01762275457619856, 23.95)], -159.9394782671595352921835),
    (&[(0.00016242778286884303, 2.0), (0.00010844604236073514, 13.0), (0.0005550903485280412, 24.594), (0.004309993273399232, 13.0)], -234.4406203556128515133444),
    (&[(0.007359337440064266, 11.829), (0.07370516564553213, 8.0), (2.821220168753357, 13.0)], -42.73129570478334154326621),
    (&[(3.0519344896024907, 5.0), (0.1742079487230601, 40.0), (2.4682148415714127, 8.0), (0.002609613859106231, 120.0)], -273.2373100019816880408108),
    (&[(0.08114714371336366, 13.0), (0.004167803182156752, 8.0), (0.0001123710218654535, 2.0), (0.00022667205368675364, 3.0)], -69.11848370261597470492599),
    (&[(0.28846102511102084, 1.0)], -1.496643799484090633684945),
    (&[(9.822035338565058, 600.0), (0.002243437656957637, 3.0), (0.00014327751921440338, 13.638)], -106.6089899716289490881699),
    (&[(1.8759568600085763, 22.093)], -1.787245316943530631395425),
    (&[(0.0039741304486322175, 3.0), (0.1685811531114822, 8.0), (0.2518238817902561, 120.0), (0.8448166088810052, 600.0)], -25.28053152143130076563322),
    (&[(0.035981865757397195, 2.0), (0.8530379700728159, 13.0), (0.02956183973097264, 17.653)], -32.68667318209267679615229),
    (&[(0.005636374071702262, 8.0)], -31.02325588635096634419647),
    (&[(0.005413316664546917, 600.0), (0.003914417177963112, 3.0), (0.02075449898549606, 5.0)], -426.1666225809279274959099),
    (&[(0.005675879544276452, 7.144), (0.0247558729685837, 20.661), (0.00011098275076379053, 21.766), (0.00016047479945236016, 120.0)], -689.0398948799741807707951),
    (&[(0.024966472087834715, 1.0)], -3.714881372599286306322941),
    (&[(0.4202076084232665, 8.0)], -4.328963546069748169558136),
    (&[(0.00010966122159756993, 2.0), (0.0031190901311671146, 600.0)], -598.0733254191297986803749),
    (&[(0.00041777047490529947, 6.451), (0.03751387651992516, 13.0), (0.08613150923669616, 9.847), (0.00020977724889006507, 600.0)], -1885.758248528388449052172),
    (&[(0.15498714984725628, 3.578), (0.00510914091634014, 6.457), (0.007294334000815467, 1.0)], -30.86315029888659734296312),
    (&[(0.06259575048906214, 13.0), (0.0005152443220274017, 5.0), (0.9114618721741413, 3.0), (0.009065658249135312, 8.0)], -59.35389975106842014798359),
    (&[(0.004641589793131798, 13.407), (5.508635454256978, 28.764), (0.5785570014822117, 1.0), (0.44166961252608794, 1.0)], -48.8605515522636460263248),
];
