from pcmeter.cli import main

raise SystemExit(main())
