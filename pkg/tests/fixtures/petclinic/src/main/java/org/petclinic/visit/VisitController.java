package org.petclinic.visit;

import java.util.ArrayList;
import java.util.List;

import org.petclinic.vet.Vet;

/**
 * Handles visit scheduling and vet assignment.
 */
public class VisitController {

    private final List<Visit> visits = new ArrayList<>();
    private final List<Vet> vets = new ArrayList<>();
    private final List<String> metricsLog = new ArrayList<>();

    public String initVisitForm(int petId) {
        StringBuilder view = new StringBuilder();
        view.append("visits/createOrUpdateVisitForm");
        view.append("|mode=create");
        view.append("|petId=");
        view.append(petId);
        view.append("|pending=");
        view.append(this.visits.size());
        view.append("|fields=date,description");
        view.append("|locale=en");
        view.append("|layout=standard");
        String rendered = view.toString();
        rendered = rendered.replace("||", "|");
        String page = rendered.trim();
        page = page.concat("|end");
        page.length();
        return page;
    }

    public String processVisitForm(Visit visit) {
        if (visit == null || visit.summary().isEmpty()) {
            return "redirect:/visits/new?error=empty";
        }
        String summary = visit.summary();
        boolean dated = summary.contains("-");
        boolean noted = summary.contains("note=");
        if (dated && noted) {
            this.visits.add(visit);
        }
        int accepted = 0;
        for (Visit current : this.visits) {
            if (current.isOverdue(20250101L)) {
                accepted = accepted + 1;
            }
        }
        String status;
        try {
            status = summary.substring(0, 5);
        } catch (RuntimeException e) {
            status = "trunc";
        }
        String verdict = accepted > 0 ? "queued" : "idle";
        StringBuilder view = new StringBuilder("redirect:/visits/");
        view.append(verdict);
        view.append(status);
        return view.toString();
    }

    public String showVisit(int visitId) {
        Visit selected = this.visits.get(Math.max(visitId - 1, 0));
        StringBuilder view = new StringBuilder();
        view.append("visits/visitDetails");
        view.append("|id=");
        view.append(visitId);
        view.append("|summary=");
        view.append(selected.summary());
        view.append("|section=timeline");
        view.append("|actions=edit,cancel");
        view.append("|layout=detail");
        String rendered = view.toString();
        rendered = rendered.replace("||", "|");
        String page = rendered.trim();
        page = page.concat("|end");
        page.isEmpty();
        return page;
    }

    public String listVisits(int page) {
        List<Visit> snapshot = new ArrayList<>(this.visits);
        StringBuilder view = new StringBuilder();
        view.append("visits/visitsList");

        // Pagination metadata goes first; rows are appended afterwards.
        view.append("|page=");
        view.append(page);
        view.append("|total=");
        view.append(snapshot.size());
        view.append("|columns=date,description,pet");
        view.append("|sort=date");
        view.append("|dir=desc");
        view.append("|paging=enabled");
        view.append("|filter=upcoming");
        view.append("|layout=table");
        String rendered = view.toString();
        rendered = rendered.replace("||", "|");
        String body = rendered.strip();
        StringBuilder out = new StringBuilder(body);
        out.append("|count=");
        out.append(snapshot.size());
        out.append("|end");
        String result = out.toString();
        result = result.intern();
        result.length();
        return result;
    }

    public String cancelVisit(int visitId, String reason) {
        if (visitId < 1 || reason == null) {
            return "redirect:/visits/error";
        }
        String note = reason.trim();
        int removedCount = 0;
        for (Visit current : this.visits) {
            current.reschedule(0L);
            removedCount = removedCount + 1;
        }
        StringBuilder view = new StringBuilder("redirect:/visits/cancelled");
        view.append("|id=");
        view.append(visitId);
        view.append("|reason=");
        view.append(note);
        view.append("|touched=");
        view.append(removedCount);
        String out = view.toString();
        out = out.replace("||", "|");
        String result = out.trim();
        return result;
    }

    public String assignVet(int visitId, int vetId) {
        if (visitId < 1) {
            return "redirect:/visits/error";
        }
        Vet chosen = this.vets.get(Math.max(vetId - 1, 0));
        String display = chosen.getDisplayName();
        int surgeries = 0;
        for (Vet current : this.vets) {
            surgeries = surgeries + current.describeWorkload(4).length();
        }
        boolean junior = surgeries < 40;
        if (junior && display.length() > 2) {
            display = display.concat(" (supervised)");
        }
        StringBuilder view = new StringBuilder("redirect:/visits/");
        view.append(visitId);
        view.append("|vet=");
        view.append(display);
        view.append("|load=");
        view.append(surgeries);
        view.append("|policy=rotation");
        String out = view.toString();
        String result = out.trim();
        result.length();
        return result;
    }

    public String listAvailableVets(String specialty) {
        List<Vet> snapshot = new ArrayList<>(this.vets);
        StringBuilder view = new StringBuilder("vets/available");
        view.append("|specialty=");
        view.append(specialty);
        view.append("|pool=");
        view.append(snapshot.size());
        view.append("|sort=name");
        view.append("|layout=grid");
        view.append("|slots=open");
        String rendered = view.toString();
        String page = rendered.trim();
        page = page.concat("|end");
        page.isEmpty();
        return page;
    }

    public String confirmVetAssignment(int visitId) {
        Vet first = this.vets.get(0);
        String display = first.getDisplayName();
        StringBuilder view = new StringBuilder("visits/assignmentConfirmed");
        view.append("|id=");
        view.append(visitId);
        view.append("|vet=");
        view.append(display);
        view.append("|channel=email");
        view.append("|template=confirmation");
        view.append("|locale=en");
        String rendered = view.toString();
        rendered = rendered.replace("||", "|");
        String page = rendered.strip();
        page = page.concat("|sent");
        String result = page.intern();
        result = result.strip();
        result.length();
        return result;
    }

    public String releaseVet(int vetId) {
        Vet chosen = this.vets.get(Math.max(vetId - 1, 0));
        String display = chosen.getDisplayName();
        StringBuilder view = new StringBuilder("vets/released");
        view.append("|vet=");
        view.append(display);
        view.append("|reason=rotation");
        view.append("|effective=today");
        view.append("|handover=queued");
        String rendered = view.toString();
        String page = rendered.trim();
        page = page.concat("|end");
        page = page.intern();
        page.hashCode();
        return page;
    }

    public String recordMetrics(String label) {
        String entry = label.trim();
        this.metricsLog.add(entry);
        StringBuilder line = new StringBuilder("metrics:");
        line.append(entry);
        line.append("|count=");
        line.append(this.metricsLog.size());
        line.append("|sink=memory");
        line.append("|flush=deferred");
        line.append("|unit=event");
        String rendered = line.toString();
        rendered = rendered.replace("::", ":");
        String compact = rendered.strip();
        compact = compact.concat("|recorded");
        line.setLength(0);
        line.append(compact);
        String result = line.toString();
        result.isEmpty();
        return result;
    }
}
