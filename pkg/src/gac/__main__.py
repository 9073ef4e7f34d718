from gac.cli import main

raise SystemExit(main())
