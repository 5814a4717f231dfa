package edu.nd.dronology.ui.vaadin.activeflights;

import com.vaadin.ui.Button;
import com.vaadin.ui.CustomComponent;

/**
 * Emergency commands for a UAV such as hovering in place or returning home.
 */
public class AFEmergencyComponent extends CustomComponent {
    private Button hoverButton;
    private Button homeButton;

    public void sendEmergencyCommand(String command) {
        hoverButton.setEnabled(command != null);
    }
}
