package edu.nd.dronology.ui.vaadin.activeflights;

import com.vaadin.ui.Button;
import com.vaadin.ui.CustomComponent;
import com.vaadin.ui.Image;

/**
 * Info panel for a single drone.
 */
public class AFInfoBox extends CustomComponent {
    private Image assignRouteIcon;
    private Button assignNewRoute;
    private boolean checked;

    public void createContents() {
        assignRouteIcon.setSource(ImageProvider.getAssignRouteResource());
        assignNewRoute.setDescription("Assign new route");
    }

    public boolean isChecked() {
        return checked;
    }
}
